import random
from fractions import Fraction

import pytest

from helpers import (
    classical_permanent_oracle,
    per_alpha_oracle,
    random_block_spec,
    random_star_forest_matrix,
)
from loopperm import (
    AlphaPolynomial,
    SizeCapError,
    SquareMatrix,
    StructureError,
    closed_form_coefficient,
    crossing_of_permutation,
    expansion_by_crossing,
    graph_of_matrix,
    per_alpha_block,
    per_alpha_brute,
    per_alpha_starforest,
    tq_enumerate,
)
from loopperm.errors import ConsistencyError
from loopperm.matrices import block_expand
from loopperm.permanent import crossing_alpha_sum, entry_monomial


def path3_matrix():
    return SquareMatrix.rational([[0, 1, 0], [1, 0, 1], [0, 1, 0]])


def test_brute_single_entry():
    assert per_alpha_brute(SquareMatrix.rational([[2]])) == AlphaPolynomial([0, 2])


def test_brute_swap_only():
    m = SquareMatrix.rational([[0, 1], [1, 0]])
    assert per_alpha_brute(m) == AlphaPolynomial([0, 1])


def test_brute_all_ones():
    m = SquareMatrix.rational([[1, 1], [1, 1]])
    assert per_alpha_brute(m) == AlphaPolynomial([0, 1, 1])


def test_brute_matches_oracle_random():
    rng = random.Random(7)
    for _ in range(25):
        d = rng.randint(1, 4)
        rows = [
            [Fraction(rng.randint(-2, 3), rng.randint(1, 3)) for _ in range(d)]
            for _ in range(d)
        ]
        m = SquareMatrix.rational(rows)
        assert per_alpha_brute(m).coeffs == AlphaPolynomial(per_alpha_oracle(rows)).coeffs


def test_brute_cap():
    m = SquareMatrix.rational([[1] * 4 for _ in range(4)])
    with pytest.raises(SizeCapError):
        per_alpha_brute(m, cap=3)


def test_block_tridiagonal_example():
    # All 24 permutations of the order-4 expansion, grouped by hand: two
    # double transpositions and two 4-cycles survive the sparsity.
    assert per_alpha_block(path3_matrix(), (1, 2, 1)) == AlphaPolynomial([0, 2, 2])


def test_block_swap_example():
    m = SquareMatrix.rational([[0, 1], [1, 0]])
    assert per_alpha_block(m, (1, 1)) == AlphaPolynomial([0, 1])


def test_block_zero_spec_gives_one():
    m = SquareMatrix.rational([[5, 5], [5, 5]])
    assert per_alpha_block(m, (0, 0)) == AlphaPolynomial.one()


def test_block_degree_and_constant_term():
    rng = random.Random(13)
    for _ in range(10):
        d = rng.randint(1, 3)
        rows = [
            [Fraction(rng.randint(1, 4), rng.randint(1, 4)) for _ in range(d)]
            for _ in range(d)
        ]
        m = SquareMatrix.rational(rows)
        q = tuple(rng.randint(0, 2) for _ in range(d))
        if sum(q) == 0:
            continue
        poly = per_alpha_block(m, q)
        assert poly.degree == sum(q)  # identity permutation, all diagonals nonzero
        assert poly.coeffs[0] == 0


def test_alpha_one_is_classical_permanent():
    rng = random.Random(31)
    for _ in range(15):
        d = rng.randint(1, 6)
        rows = [
            [Fraction(rng.randint(0, 3), rng.randint(1, 3)) for _ in range(d)]
            for _ in range(d)
        ]
        m = SquareMatrix.rational(rows)
        assert per_alpha_brute(m).evaluate(1) == classical_permanent_oracle(rows)


def test_crossing_of_permutation_examples():
    _, base_map = block_expand(SquareMatrix.rational([[1, 1], [1, 1]]), (2, 1))
    assert crossing_of_permutation((0, 1, 2), base_map) == ((2, 0), (0, 1))
    m1 = SquareMatrix.rational([[1, 0], [0, 1]])
    _, bm = block_expand(m1, (2, 0))
    assert crossing_of_permutation((1, 0), bm, d=2) == ((2, 0), (0, 0))
    # 4-cycle (1, 2a, 3, 2b) on the path blocks q=(1,2,1):
    _, bm3 = block_expand(path3_matrix(), (1, 2, 1))
    # positions: 0 -> vertex 1, 1/2 -> copies of 2, 3 -> vertex 3
    pi = (1, 3, 0, 2)  # 0->2a, 2a->3, 2b->1, 3->2b
    assert crossing_of_permutation(pi, bm3) == ((0, 1, 0), (1, 0, 1), (0, 1, 0))


def test_expansion_path_single_key():
    expansion = expansion_by_crossing(path3_matrix(), (1, 2, 1))
    key = ((0, 1, 0), (1, 0, 1), (0, 1, 0))
    assert set(expansion) == {key}
    assert expansion[key] == AlphaPolynomial([0, 2, 2])


def test_expansion_single_vertex():
    expansion = expansion_by_crossing(SquareMatrix.rational([["1/3"]]), (2,))
    assert expansion == {((2,),): AlphaPolynomial([0, 1, 1])}


def test_expansion_diagonal_matrix():
    m = SquareMatrix.rational([[2, 0], [0, 3]])
    expansion = expansion_by_crossing(m, (1, 1))
    assert set(expansion) == {((1, 0), (0, 1))}
    assert expansion[((1, 0), (0, 1))] == AlphaPolynomial([0, 0, 1])


def test_expansion_reconstruction():
    rng = random.Random(5)
    for _ in range(10):
        d = rng.randint(1, 3)
        rows = [
            [Fraction(rng.randint(0, 2), rng.randint(1, 2)) for _ in range(d)]
            for _ in range(d)
        ]
        m = SquareMatrix.rational(rows)
        q = tuple(rng.randint(0, 2) for _ in range(d))
        expansion = expansion_by_crossing(m, q)
        total = AlphaPolynomial.zero()
        for n, poly in expansion.items():
            assert tuple(sum(row) for row in n) == q
            assert tuple(sum(row) for row in n) == tuple(
                sum(n[i][j] for i in range(d)) for j in range(d)
            )
            total = total + poly * entry_monomial(m, n)
        assert total == per_alpha_block(m, q)


def test_crossing_alpha_sum_matches_expansion():
    rng = random.Random(17)
    for _ in range(8):
        d = rng.randint(1, 3)
        rows = [
            [Fraction(rng.randint(1, 3), rng.randint(1, 3)) for _ in range(d)]
            for _ in range(d)
        ]
        m = SquareMatrix.rational(rows)
        q = tuple(rng.randint(0, 2) for _ in range(d))
        for n, poly in expansion_by_crossing(m, q).items():
            assert crossing_alpha_sum(q, n) == poly


def test_crossing_alpha_sum_rejects_bad_input():
    with pytest.raises(ConsistencyError):
        crossing_alpha_sum((1, 1), ((1, 1), (0, 0)))


def test_closed_form_examples():
    path = ((0, 1, 0), (1, 0, 1), (0, 1, 0))
    assert closed_form_coefficient((1, 2, 1), path) == AlphaPolynomial([0, 2, 2])
    edge = ((0, 1), (1, 0))
    assert closed_form_coefficient((1, 1), edge) == AlphaPolynomial([0, 1])
    selfloop = ((3,),)
    assert closed_form_coefficient((3,), selfloop) == AlphaPolynomial.rising(3)


def test_closed_form_rejects_asymmetric():
    with pytest.raises(ConsistencyError):
        closed_form_coefficient((1, 1), ((0, 1), (0, 1)))


def test_closed_form_flags_nonpolynomial_ratio():
    # Crossings inconsistent with the row sums leave a nonzero remainder.
    with pytest.raises(ConsistencyError, match="outside the support"):
        closed_form_coefficient((1, 1), ((0, 2), (2, 0)))


def test_expansion_serialization_order():
    from loopperm.permanent import expansion_to_json

    m = SquareMatrix.rational([[1, 1], [1, 1]])
    data = expansion_to_json(expansion_by_crossing(m, (1, 1)))
    keys = [tuple(tuple(r) for r in item["crossing"]) for item in data]
    assert keys == sorted(keys)
    assert all(set(item) == {"crossing", "poly"} for item in data)


def test_starforest_examples():
    path = SquareMatrix.rational([[0, "1/2", 0], ["1/2", 0, "1/2"], [0, "1/2", 0]])
    assert per_alpha_starforest(path, (1, 2, 1)) == per_alpha_block(path, (1, 2, 1))
    diag = SquareMatrix.rational([[2, 0], [0, 3]])
    assert per_alpha_starforest(diag, (1, 1)) == AlphaPolynomial([0, 0, 6])
    both = SquareMatrix.rational([[5, 2], [3, 7]])  # s=5 a=2 b=3 t=7
    assert per_alpha_starforest(both, (1, 1)) == AlphaPolynomial([0, 6, 35])


def test_starforest_rejects_general_graph():
    m = SquareMatrix.rational([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    with pytest.raises(StructureError):
        per_alpha_starforest(m, (1, 1, 1))


def test_starforest_matches_brute_random_corpus():
    rng = random.Random(2718)
    for _ in range(30):
        d = rng.randint(1, 4)
        matrix = random_star_forest_matrix(rng, d)
        q = random_block_spec(rng, d, max_entry=3, max_total=7)
        assert per_alpha_starforest(matrix, q) == per_alpha_block(matrix, q)


def test_closed_form_matches_grouped_brute_random():
    rng = random.Random(999)
    for _ in range(12):
        d = rng.randint(1, 4)
        matrix = random_star_forest_matrix(rng, d)
        graph = graph_of_matrix(matrix)
        q = random_block_spec(rng, d, max_entry=2, max_total=6)
        for n in tq_enumerate(graph, q):
            assert closed_form_coefficient(q, n) == crossing_alpha_sum(q, n)
