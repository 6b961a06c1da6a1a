"""Truncated multivariate formal power series and the determinant-series check.

A ``MultiSeries`` stores a dense coefficient table over the box of
multi-indices bounded by a per-variable cap.  Arithmetic is exact modulo
truncation: every retained coefficient equals the coefficient of the
untruncated result.  Caps stay tiny here (a handful of variables to degree
three or so), so the dense representation and the direct log/exp series
recurrences are entirely adequate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .alphapoly import factorial_fraction
from .errors import DomainError, SizeCapError
from .linalg import exact_det
from .matrices import RATIONAL, SquareMatrix, check_block_spec
from .permanent import block_coeff_list, per_alpha_block

SERIES_DET_MAX_DIM = 6
FLOAT_RELATIVE_TOL = 1e-9


class MultiSeries:
    """Dense truncated power series in d variables over a capped box."""

    __slots__ = ("d", "cap", "coeffs", "exact")

    def __init__(self, d: int, cap: Sequence[int], exact: bool = True,
                 coeffs: dict[tuple[int, ...], object] | None = None):
        self.d = d
        self.cap = tuple(int(c) for c in cap)
        if len(self.cap) != d or any(c < 0 for c in self.cap):
            raise DomainError("cap must list one nonnegative bound per variable")
        self.exact = exact
        self.coeffs: dict[tuple[int, ...], object] = {}
        if coeffs:
            for key, val in coeffs.items():
                if val != 0:
                    self.coeffs[key] = val

    # -- helpers -------------------------------------------------------------

    def _zero(self):
        return Fraction(0) if self.exact else 0.0

    def _like(self, coeffs=None) -> "MultiSeries":
        return MultiSeries(self.d, self.cap, self.exact, coeffs)

    def coefficient(self, q: Sequence[int]):
        return self.coeffs.get(tuple(q), self._zero())

    def constant_term(self):
        return self.coefficient((0,) * self.d)

    @classmethod
    def constant(cls, d: int, cap: Sequence[int], value, exact: bool = True) -> "MultiSeries":
        s = cls(d, cap, exact)
        if value != 0:
            s.coeffs[(0,) * d] = Fraction(value) if exact else float(value)
        return s

    def indices(self):
        return product(*(range(c + 1) for c in self.cap))

    # -- ring operations ------------------------------------------------------

    def __add__(self, other: "MultiSeries") -> "MultiSeries":
        self._check_compatible(other)
        out = dict(self.coeffs)
        for key, val in other.coeffs.items():
            out[key] = out.get(key, self._zero()) + val
        return self._like(out)

    def __sub__(self, other: "MultiSeries") -> "MultiSeries":
        return self + other.scale(-1)

    def scale(self, factor) -> "MultiSeries":
        factor = Fraction(factor) if self.exact else float(factor)
        return self._like({k: v * factor for k, v in self.coeffs.items()})

    def __mul__(self, other: "MultiSeries") -> "MultiSeries":
        self._check_compatible(other)
        cap = self.cap
        out: dict[tuple[int, ...], object] = {}
        for ka, va in self.coeffs.items():
            for kb, vb in other.coeffs.items():
                key = tuple(a + b for a, b in zip(ka, kb))
                if any(k > c for k, c in zip(key, cap)):
                    continue
                prev = out.get(key)
                term = va * vb
                out[key] = term if prev is None else prev + term
        return self._like(out)

    def _check_compatible(self, other: "MultiSeries") -> None:
        if self.d != other.d or self.cap != other.cap or self.exact != other.exact:
            raise DomainError("series operands must share dimension, cap, and mode")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coefficient(k) == other.coefficient(k) for k in keys)

    def __hash__(self):
        raise TypeError("MultiSeries is mutable; not hashable")

    def max_total_degree(self) -> int:
        return sum(self.cap)


def series_log(s: MultiSeries) -> MultiSeries:
    """log of a series with constant term 1, via the alternating power series.

    The argument minus one has zero constant term, so its k-th power only
    reaches total degree >= k and the sum terminates at the cap's total
    degree.
    """
    if s.constant_term() != 1:
        raise DomainError("series logarithm needs constant term exactly 1")
    u = s - MultiSeries.constant(s.d, s.cap, 1, s.exact)
    depth = s.max_total_degree()
    out = MultiSeries(s.d, s.cap, s.exact)
    power = MultiSeries.constant(s.d, s.cap, 1, s.exact)
    for k in range(1, depth + 1):
        power = power * u
        if not power.coeffs:
            break
        sign = 1 if k % 2 == 1 else -1
        coef = Fraction(sign, k) if s.exact else sign / k
        out = out + power.scale(coef)
    return out


def series_exp(s: MultiSeries) -> MultiSeries:
    """exp of a series with zero constant term."""
    if s.constant_term() != 0:
        raise DomainError("series exponential needs zero constant term")
    depth = s.max_total_degree()
    out = MultiSeries.constant(s.d, s.cap, 1, s.exact)
    term = MultiSeries.constant(s.d, s.cap, 1, s.exact)
    for k in range(1, depth + 1):
        term = term * s
        if not term.coeffs:
            break
        coef = 1 / factorial_fraction(k) if s.exact else 1.0 / math.factorial(k)
        out = out + term.scale(coef)
    return out


def series_neg_alpha_power(s: MultiSeries, alpha) -> MultiSeries:
    """Raise a constant-term-1 series to the power -alpha, as exp(-alpha log)."""
    if s.constant_term() != 1:
        raise DomainError("power series expansion needs constant term exactly 1")
    log_s = series_log(s)
    factor = -Fraction(alpha) if s.exact else -float(alpha)
    return series_exp(log_s.scale(factor))


def series_det_IminusZA(matrix: SquareMatrix, cap: Sequence[int]) -> MultiSeries:
    """The polynomial det(I - ZA) with Z = diag(z_1..z_d), exactly.

    Expanded over principal minors: the coefficient of the squarefree
    monomial prod_{i in S} z_i is (-1)^{|S|} det(A restricted to S); no other
    monomials occur.
    """
    d = matrix.d
    if d > SERIES_DET_MAX_DIM:
        raise SizeCapError(
            f"determinant series supports dimension <= {SERIES_DET_MAX_DIM}, got {d}"
        )
    cap = tuple(int(c) for c in cap)
    if len(cap) != d:
        raise DomainError("cap must list one bound per variable")
    exact = matrix.mode == RATIONAL
    out = MultiSeries(d, cap, exact)
    out.coeffs[(0,) * d] = Fraction(1) if exact else 1.0
    for size in range(1, d + 1):
        for subset in combinations(range(d), size):
            key = tuple(1 if i in subset else 0 for i in range(d))
            if any(k > c for k, c in zip(key, cap)):
                continue
            sub = [[matrix.entries[i][j] for j in subset] for i in subset]
            if exact:
                minor = exact_det(sub)
            else:
                minor = float(np.linalg.det(np.array(sub, dtype=float))) if size > 1 else sub[0][0]
            val = (Fraction(-1) ** size) * minor if exact else (-1.0) ** size * minor
            if val != 0:
                out.coeffs[key] = val
    return out


# -- the series-versus-permanent comparison ----------------------------------


@dataclass
class SeriesCheckRow:
    q: tuple[int, ...]
    series_coeff: object
    permanent_coeff: object
    residual: object

    def to_json(self) -> dict:
        def render(x):
            return str(x) if isinstance(x, Fraction) else float(x)

        return {
            "q": list(self.q),
            "series_coeff": render(self.series_coeff),
            "permanent_coeff": render(self.permanent_coeff),
            "residual": render(self.residual),
        }


@dataclass
class SeriesCheckReport:
    mode: str
    alpha: object
    cap: tuple[int, ...]
    rows: list[SeriesCheckRow] = field(default_factory=list)
    passed: bool = True
    max_relative_residual: float = 0.0

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "alpha": str(self.alpha) if isinstance(self.alpha, Fraction) else self.alpha,
            "cap": list(self.cap),
            "passed": self.passed,
            "max_relative_residual": self.max_relative_residual,
            "rows": [r.to_json() for r in self.rows],
        }


def macmahon_check(
    matrix: SquareMatrix,
    alpha,
    cap: Sequence[int],
    brute_cap: int | None = None,
) -> SeriesCheckReport:
    """Compare the power expansion of det(I-ZA)**(-alpha) against block
    alpha-permanents, coefficient by coefficient up to the cap.

    In exact (rational matrix, rational alpha) mode residuals must vanish
    identically; in float mode they are compared relatively at 1e-9.
    """
    cap = check_block_spec(cap, matrix.d)
    exact = matrix.mode == RATIONAL and isinstance(alpha, (int, Fraction))
    work_matrix = matrix if exact else matrix.as_mode("float")
    det_series = series_det_IminusZA(work_matrix, cap)
    expansion = series_neg_alpha_power(det_series, alpha)
    report = SeriesCheckReport(mode=RATIONAL if exact else "float",
                               alpha=Fraction(alpha) if exact else float(alpha),
                               cap=cap)
    for q in sorted(product(*(range(c + 1) for c in cap))):
        series_coeff = expansion.coefficient(q)
        poly = per_alpha_block(matrix, q, brute_cap) if matrix.mode == RATIONAL else None
        if exact:
            perm_coeff = poly.evaluate(Fraction(alpha))
            for qi in q:
                perm_coeff /= factorial_fraction(qi)
            residual = series_coeff - perm_coeff
            rel = 0.0 if residual == 0 else float("inf")
        else:
            if poly is not None:
                value = poly.evaluate(float(alpha))
            else:
                coeffs = block_coeff_list(matrix, q, brute_cap)
                value = 0.0
                for c in reversed(coeffs):
                    value = value * float(alpha) + float(c)
            for qi in q:
                value /= math.factorial(qi)
            perm_coeff = value
            residual = float(series_coeff) - perm_coeff
            scale = max(abs(float(series_coeff)), abs(perm_coeff))
            rel = 0.0 if scale == 0 else abs(residual) / scale
        row = SeriesCheckRow(q=q, series_coeff=series_coeff,
                             permanent_coeff=perm_coeff, residual=residual)
        report.rows.append(row)
        if exact:
            if residual != 0:
                report.passed = False
                report.max_relative_residual = float("inf")
        else:
            report.max_relative_residual = max(report.max_relative_residual, rel)
            if rel > FLOAT_RELATIVE_TOL:
                report.passed = False
    return report
