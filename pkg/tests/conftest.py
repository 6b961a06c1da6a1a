import pytest

from loopperm import SquareMatrix, validate_chain


@pytest.fixture(scope="session")
def chain_p2():
    """Two states swapping with probability 1/2, killed otherwise."""
    return validate_chain(SquareMatrix.rational([[0, "1/2"], ["1/2", 0]]))


@pytest.fixture(scope="session")
def chain_path3():
    """Three states on a path, each step 1/3, killing everywhere."""
    return validate_chain(
        SquareMatrix.rational(
            [[0, "1/3", 0], ["1/3", 0, "1/3"], [0, "1/3", 0]]
        )
    )


@pytest.fixture(scope="session")
def chain_selfloop1():
    """Single state holding with probability 1/2."""
    return validate_chain(SquareMatrix.rational([["1/2"]]))


@pytest.fixture(scope="session")
def chain_selfloop2():
    """Self-loop at state 1 plus an edge to state 2."""
    return validate_chain(SquareMatrix.rational([["1/4", "1/4"], ["1/2", 0]]))


@pytest.fixture(scope="session")
def chain_triangle():
    """Fully connected three-state chain (not a star-forest)."""
    return validate_chain(
        SquareMatrix.rational(
            [[0, "1/4", "1/4"], ["1/4", 0, "1/4"], ["1/4", "1/4", 0]]
        )
    )
