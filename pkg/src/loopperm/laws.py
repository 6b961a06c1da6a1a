"""Closed-form and brute-force probability laws for soup occupation fields.

The visit field follows a permanental law: the probability of a visit
vector q is det(I-P)**alpha times the block alpha-permanent of P at q over
the product of q factorials.  On star-forest chains the crossing field has
the explicit product form built from rising factorials; summing it over the
crossing-support set of q recovers the visit law.

Weights (laws with the det(I-P)**alpha prefactor stripped) are exposed
separately: with a rational chain and rational alpha they are exact
Fractions, which is what the zero-tolerance identity checks consume.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Sequence

from .alphapoly import factorial_fraction
from .chains import SubMarkovChain, det_I_minus_P
from .errors import DomainError, StructureError
from .graphs import Crossing, col_sums, crossing_in_tq, row_sums, tq_enumerate
from .matrices import RATIONAL, check_block_spec
from .permanent import (
    block_coeff_list,
    closed_form_coefficient,
    crossing_alpha_sum,
    entry_monomial,
    per_alpha_block,
    per_alpha_starforest,
)

AUTO = "auto"
BRUTE = "brute"
CLOSED = "closed"


def _is_exact(chain: SubMarkovChain, alpha) -> bool:
    return chain.mode == RATIONAL and isinstance(alpha, (int, Fraction))


def _pick_method(chain: SubMarkovChain, method: str) -> str:
    if method not in (AUTO, BRUTE, CLOSED):
        raise DomainError(f"unknown evaluation method {method!r}")
    if method == AUTO:
        return CLOSED if chain.graph().is_star_forest else BRUTE
    if method == CLOSED and not chain.graph().is_star_forest:
        raise StructureError("closed-form law requires a star-forest chain")
    return method


def theta_weight(chain: SubMarkovChain, alpha, q: Sequence[int],
                 method: str = AUTO, cap: int | None = None):
    """Block alpha-permanent of P at q, evaluated at alpha, over prod q_i!.

    Returns an exact Fraction for rational chains with rational alpha,
    otherwise a float.
    """
    q = check_block_spec(q, chain.d)
    method = _pick_method(chain, method)
    exact = _is_exact(chain, alpha)
    if method == CLOSED:
        value = _starforest_value(chain, alpha, q, exact)
    else:
        if chain.mode == RATIONAL:
            poly = per_alpha_block(chain.matrix, q, cap)
            value = poly.evaluate(Fraction(alpha) if exact else float(alpha))
        else:
            value = _horner(block_coeff_list(chain.matrix, q, cap), float(alpha))
    for qi in q:
        value /= factorial_fraction(qi) if exact else math.factorial(qi)
    return value


def _starforest_value(chain: SubMarkovChain, alpha, q, exact: bool):
    graph = chain.graph()
    if exact:
        poly = per_alpha_starforest(chain.matrix, q)
        return poly.evaluate(Fraction(alpha))
    total = 0.0
    for n in tq_enumerate(graph, q):
        mono = float(entry_monomial(chain.matrix, n))
        if mono:
            total += closed_form_coefficient(q, n).evaluate(float(alpha)) * mono
    return total


def det_power(chain: SubMarkovChain, alpha) -> float:
    return float(det_I_minus_P(chain)) ** float(alpha)


def theta_law(chain: SubMarkovChain, alpha, q: Sequence[int],
              method: str = AUTO, cap: int | None = None) -> float:
    """Probability that the soup's visit field equals q."""
    return det_power(chain, alpha) * float(theta_weight(chain, alpha, q, method, cap))


def crossing_weight_starforest(chain: SubMarkovChain, alpha, n: Crossing):
    """Crossing-law weight (law over det**alpha) on a star-forest chain."""
    graph = chain.graph()
    if not graph.is_star_forest:
        raise StructureError("crossing law in product form needs a star-forest chain")
    q = row_sums(n)
    if not crossing_in_tq(graph, q, n):
        raise DomainError("crossing matrix is outside the support set of its row sums")
    exact = _is_exact(chain, alpha)
    coeff_poly = closed_form_coefficient(q, n)
    mono = entry_monomial(chain.matrix, n)
    if exact:
        value = coeff_poly.evaluate(Fraction(alpha)) * mono
        for qi in q:
            value /= factorial_fraction(qi)
        return value
    value = coeff_poly.evaluate(float(alpha)) * float(mono)
    for qi in q:
        value /= math.factorial(qi)
    return value


def n_law_starforest(chain: SubMarkovChain, alpha, n: Crossing) -> float:
    """Probability that the soup's crossing field equals n (star-forest chains)."""
    return det_power(chain, alpha) * float(crossing_weight_starforest(chain, alpha, n))


def edge_law_general(chain: SubMarkovChain, alpha, n: Crossing,
                     cap: int | None = None) -> float:
    """Crossing-field probability for any chain, via the grouped expansion.

    The coefficient of the crossing class is recovered by enumerating the
    permutations realizing it, so this route works (and stays exact in the
    weight) on general graphs; it is exponential in sum(q).
    """
    if len(n) != chain.d or any(len(row) != chain.d for row in n):
        raise DomainError("crossing matrix shape does not match the chain")
    if any(x < 0 for row in n for x in row):
        raise DomainError("crossing counts must be nonnegative")
    if row_sums(n) != col_sums(n):
        raise DomainError("crossing matrix must be sourceless")
    q = row_sums(n)
    mono = entry_monomial(chain.matrix, n)
    if mono == 0:
        return 0.0
    poly = crossing_alpha_sum(q, n)
    exact = _is_exact(chain, alpha)
    if exact:
        weight = poly.evaluate(Fraction(alpha)) * mono
        for qi in q:
            weight /= factorial_fraction(qi)
    else:
        weight = poly.evaluate(float(alpha)) * float(mono)
        for qi in q:
            weight /= math.factorial(qi)
    return det_power(chain, alpha) * float(weight)


def enumerate_theta_outcomes(chain: SubMarkovChain, alpha, qcap: Sequence[int],
                             pmin: float = 0.0, total_cap: int | None = None,
                             method: str = AUTO, cap: int | None = None
                             ) -> list[tuple[tuple[int, ...], float]]:
    """(q, probability) pairs over the box q <= qcap, filtered by pmin."""
    qcap = check_block_spec(qcap, chain.d)
    det_a = det_power(chain, alpha)
    out = []
    for q in sorted(product(*(range(c + 1) for c in qcap))):
        if total_cap is not None and sum(q) > total_cap:
            continue
        p = det_a * float(theta_weight(chain, alpha, q, method, cap))
        if p >= pmin:
            out.append((q, p))
    return out


def enumerate_crossing_outcomes(chain: SubMarkovChain, alpha, qcap: Sequence[int],
                                pmin: float = 0.0, total_cap: int | None = None
                                ) -> list[tuple[Crossing, float]]:
    """(n, probability) pairs over support sets of all q <= qcap."""
    qcap = check_block_spec(qcap, chain.d)
    graph = chain.graph()
    if not graph.is_star_forest:
        raise StructureError("crossing outcome enumeration needs a star-forest chain")
    det_a = det_power(chain, alpha)
    out = []
    for q in sorted(product(*(range(c + 1) for c in qcap))):
        if total_cap is not None and sum(q) > total_cap:
            continue
        for n in tq_enumerate(graph, q):
            p = det_a * float(crossing_weight_starforest(chain, alpha, n))
            if p >= pmin:
                out.append((n, p))
    return out


def _horner(coeffs, alpha: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * alpha + float(c)
    return acc
