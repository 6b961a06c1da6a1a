import math
import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_positive_chain_rows
from loopperm import (
    DomainError,
    SquareMatrix,
    StructureError,
    UnrootedLoop,
    det_I_minus_P,
    det_identity_check,
    green_function,
    h_transform,
    loop_measure,
    star_expand,
    total_mass,
    validate_chain,
)
from loopperm.chains import restricted_chain
from loopperm.loops import canonical_rotation, rotation_multiplicity


def test_validate_basic(chain_p2):
    assert chain_p2.killing == (Fraction(1, 2), Fraction(1, 2))
    assert chain_p2.spectral_radius == pytest.approx(0.5)


def test_validate_rejects_recurrent():
    with pytest.raises(DomainError, match="transient"):
        validate_chain(SquareMatrix.rational([[0, 1], [1, 0]]))


def test_validate_accepts_uniform_third():
    chain = validate_chain(SquareMatrix.rational([["1/3", "1/3"], ["1/3", "1/3"]]))
    assert chain.killing == (Fraction(1, 3), Fraction(1, 3))


def test_validate_rejects_super_stochastic_and_negative():
    with pytest.raises(DomainError, match="sums"):
        validate_chain(SquareMatrix.rational([["2/3", "2/3"], [0, 0]]))
    with pytest.raises(DomainError, match="negative"):
        validate_chain(SquareMatrix.rational([["-1/3", 0], [0, 0]]))


def test_green_two_state(chain_p2):
    g = green_function(chain_p2)
    assert g.entries == (
        (Fraction(4, 3), Fraction(2, 3)),
        (Fraction(2, 3), Fraction(4, 3)),
    )
    assert det_I_minus_P(chain_p2) == Fraction(3, 4)


def test_green_trivial_cases():
    zero = validate_chain(SquareMatrix.rational([[0, 0], [0, 0]]))
    assert green_function(zero).entries == ((1, 0), (0, 1))
    assert det_I_minus_P(zero) == 1
    half = validate_chain(SquareMatrix.rational([["1/2"]]))
    assert green_function(half).entries == ((Fraction(2),),)
    assert det_I_minus_P(half) == Fraction(1, 2)


def test_green_properties_random():
    rng = random.Random(42)
    for _ in range(10):
        d = rng.randint(1, 4)
        chain = validate_chain(SquareMatrix.rational(random_positive_chain_rows(rng, d)))
        g = green_function(chain)
        for i in range(d):
            assert g.entries[i][i] >= 1
            for j in range(d):
                assert g.entries[i][j] >= 0
        # G(I-P) = I
        for i in range(d):
            for j in range(d):
                acc = sum(
                    g.entries[i][k]
                    * ((1 if k == j else 0) - chain.matrix.entries[k][j])
                    for k in range(d)
                )
                assert acc == (1 if i == j else 0)


def test_det_identity_example(chain_p2):
    report = det_identity_check(chain_p2, (0, 1))
    assert report.matches
    assert report.green_diagonal_terms == [Fraction(4, 3), Fraction(1)]
    assert report.product_inverse == Fraction(3, 4)


def test_det_identity_diagonal_chain():
    chain = validate_chain(SquareMatrix.rational([["1/3", 0], [0, "1/5"]]))
    report = det_identity_check(chain, (1, 0))
    assert report.matches
    assert report.product_inverse == (1 - Fraction(1, 3)) * (1 - Fraction(1, 5))


def test_det_identity_all_orderings_random():
    rng = random.Random(2024)
    for _ in range(5):
        d = rng.randint(2, 4)
        chain = validate_chain(SquareMatrix.rational(random_positive_chain_rows(rng, d)))
        for ordering in permutations(range(d)):
            assert det_identity_check(chain, ordering).matches


def test_h_transform_example(chain_p2):
    transformed, h = h_transform(chain_p2, 0)
    assert h == (Fraction(1), Fraction(1, 2))
    assert transformed.matrix.entries == (
        (Fraction(0), Fraction(1, 4)),
        (Fraction(1), Fraction(0)),
    )
    assert transformed.killing == (Fraction(3, 4), Fraction(0))
    assert det_I_minus_P(transformed) == Fraction(3, 4)


def test_h_transform_preserves_det_and_green_diagonal():
    rng = random.Random(7)
    for _ in range(10):
        d = rng.randint(1, 4)
        chain = validate_chain(SquareMatrix.rational(random_positive_chain_rows(rng, d)))
        root = rng.randrange(d)
        transformed, h = h_transform(chain, root)
        assert det_I_minus_P(transformed) == det_I_minus_P(chain)
        g0 = green_function(chain)
        g1 = green_function(transformed)
        for i in range(d):
            assert g0.entries[i][i] == g1.entries[i][i]
        # all rows off the root are stochastic
        for x in range(d):
            if x != root:
                assert transformed.killing[x] == 0


def test_h_transform_unreachable_root():
    chain = validate_chain(SquareMatrix.rational([[0, "1/2"], [0, 0]]))
    with pytest.raises(StructureError, match="unreachable"):
        h_transform(chain, 0)  # state 2 dies immediately, never hits state 1


def test_star_expand_single_selfloop(chain_selfloop1):
    star, expansion = star_expand(chain_selfloop1)
    assert star.matrix.entries == (
        (Fraction(0), Fraction(1, 2)),
        (Fraction(1), Fraction(0)),
    )
    assert star.labels == ("1", "1*")
    assert det_I_minus_P(star) == det_I_minus_P(chain_selfloop1) == Fraction(1, 2)
    assert star.graph().classification == "forest"
    assert expansion.project_crossing(((0, 3), (3, 0))) == ((3,),)


def test_star_expand_no_selfloops_is_identity(chain_p2):
    star, expansion = star_expand(chain_p2)
    assert star.matrix.entries == chain_p2.matrix.entries
    assert expansion.base_of == (0, 1)


def test_star_expand_full_flag(chain_p2):
    star, expansion = star_expand(chain_p2, full=True)
    assert star.d == 4
    assert det_I_minus_P(star) == det_I_minus_P(chain_p2)
    assert expansion.base_of == (0, 1, 0, 1)


def test_star_expand_preserves_det_random():
    rng = random.Random(11)
    for _ in range(10):
        d = rng.randint(1, 4)
        chain = validate_chain(SquareMatrix.rational(random_positive_chain_rows(rng, d)))
        star, _ = star_expand(chain)
        assert det_I_minus_P(star) == det_I_minus_P(chain)
        assert star.graph().self_loop_vertices == ()


def test_restricted_chain(chain_path3):
    sub = restricted_chain(chain_path3, [0, 2])
    assert sub.matrix.entries == ((0, 0), (0, 0))
    assert sub.labels == ("1", "3")


# -- loops -------------------------------------------------------------------


def test_canonical_rotation_and_multiplicity():
    assert canonical_rotation((1, 0)) == (0, 1)
    assert canonical_rotation((2, 0, 1)) == (0, 1, 2)
    assert rotation_multiplicity((0, 1, 0, 1)) == 2
    assert rotation_multiplicity((0, 1, 1)) == 1
    assert rotation_multiplicity((3, 3, 3)) == 3


@given(st.lists(st.integers(0, 3), min_size=1, max_size=8))
@settings(max_examples=80, deadline=None)
def test_canonicalization_rotation_invariant(seq):
    base = canonical_rotation(seq)
    for k in range(len(seq)):
        rotated = tuple(seq[k:] + seq[:k])
        assert canonical_rotation(rotated) == base
    assert canonical_rotation(base) == base  # idempotent


def test_orientation_is_preserved():
    fwd = UnrootedLoop.from_rooted((0, 1, 2))
    rev = UnrootedLoop.from_rooted((2, 1, 0))
    assert fwd != rev


def test_loop_measure_examples(chain_p2):
    assert loop_measure((0, 1), chain_p2) == Fraction(1, 4)
    assert loop_measure((0, 1, 0, 1), chain_p2) == Fraction(1, 32)
    assert loop_measure((0, 0), chain_p2) == 0  # unused transition


def test_total_mass_matches_trace_series(chain_p2):
    mass = total_mass(chain_p2)
    assert mass == pytest.approx(math.log(4 / 3))
    series = sum((1 / 4) ** k / k for k in range(1, 60))
    assert mass == pytest.approx(series)


def test_total_mass_partial_sums_geometric_tail(chain_p2, chain_path3, chain_selfloop2):
    # The measure of loops of length <= L is sum of trace(P^n)/n; it must
    # increase to the total mass with a tail bounded geometrically by the
    # spectral radius.
    import numpy as np

    for chain in (chain_p2, chain_path3, chain_selfloop2):
        p = np.array(chain.to_float_rows())
        mass = total_mass(chain)
        rho = chain.spectral_radius
        power = np.eye(chain.d)
        partial = 0.0
        previous = -1.0
        for n in range(1, 40):
            power = power @ p
            partial += float(np.trace(power)) / n
            assert partial >= previous
            tail_bound = chain.d * rho ** (n + 1) / (1 - rho)
            assert 0 <= mass - partial <= tail_bound + 1e-12
            previous = partial
        assert partial == pytest.approx(mass, abs=1e-9)


def test_loop_text_format(chain_path3):
    loop = UnrootedLoop.from_rooted((1, 0))
    assert loop.format(chain_path3.labels) == "1,2"
    assert UnrootedLoop.parse("1,2", chain_path3.labels) == loop
    assert UnrootedLoop.parse("2,1") == loop
