"""Polynomials in the cycle-weight variable with exact rational coefficients.

Permanent-style matrix functions weight each permutation by a power of a
formal variable (written ``alpha`` throughout).  Everything here stays in the
polynomial ring over ``fractions.Fraction`` so that identities between
different evaluation routes can be checked coefficient by coefficient, with
no floating-point slack.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

from .errors import ConsistencyError, DomainError

Scalar = Union[Fraction, int]


class AlphaPolynomial:
    """Immutable dense polynomial; ``coeffs[k]`` is the coefficient of alpha**k.

    Trailing zero coefficients are trimmed, so the zero polynomial has an
    empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "AlphaPolynomial":
        return cls(())

    @classmethod
    def one(cls) -> "AlphaPolynomial":
        return cls((1,))

    @classmethod
    def constant(cls, c: Scalar) -> "AlphaPolynomial":
        return cls((c,))

    @classmethod
    def variable(cls) -> "AlphaPolynomial":
        return cls((0, 1))

    @classmethod
    def monomial(cls, k: int, c: Scalar = 1) -> "AlphaPolynomial":
        if k < 0:
            raise DomainError("monomial power must be nonnegative")
        return cls((0,) * k + (c,))

    @classmethod
    def rising(cls, k: int) -> "AlphaPolynomial":
        """Rising factorial alpha*(alpha+1)*...*(alpha+k-1); gives 1 for k=0."""
        if k < 0:
            raise DomainError("rising factorial order must be nonnegative")
        poly = cls.one()
        for j in range(k):
            poly = poly * cls((j, 1))
        return poly

    # -- ring structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, AlphaPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == AlphaPolynomial.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __neg__(self) -> "AlphaPolynomial":
        return AlphaPolynomial(tuple(-c for c in self.coeffs))

    def __add__(self, other: "AlphaPolynomial | Scalar") -> "AlphaPolynomial":
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return AlphaPolynomial(out)

    __radd__ = __add__

    def __sub__(self, other: "AlphaPolynomial | Scalar") -> "AlphaPolynomial":
        return self + (-_coerce(other))

    def __rsub__(self, other: "AlphaPolynomial | Scalar") -> "AlphaPolynomial":
        return _coerce(other) + (-self)

    def __mul__(self, other: "AlphaPolynomial | Scalar | Fraction") -> "AlphaPolynomial":
        if isinstance(other, (int, Fraction)):
            return AlphaPolynomial(tuple(c * other for c in self.coeffs))
        if not isinstance(other, AlphaPolynomial):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return AlphaPolynomial.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return AlphaPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "AlphaPolynomial":
        if n < 0:
            raise DomainError("negative powers are not polynomials")
        result = AlphaPolynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: "AlphaPolynomial") -> tuple["AlphaPolynomial", "AlphaPolynomial"]:
        other = _coerce(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        den = other.coeffs
        lead = den[-1]
        dq = len(rem) - len(den)
        if dq < 0:
            return AlphaPolynomial.zero(), self
        quot = [Fraction(0)] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + len(den) - 1] / lead
            quot[k] = c
            if c:
                for j, dcoef in enumerate(den):
                    rem[k + j] -= c * dcoef
        return AlphaPolynomial(quot), AlphaPolynomial(rem)

    def exact_div(self, other: "AlphaPolynomial") -> "AlphaPolynomial":
        """Divide, requiring a zero remainder."""
        q, r = divmod(self, other)
        if r:
            raise ConsistencyError("polynomial division left a nonzero remainder")
        return q

    # -- evaluation and rendering -------------------------------------------

    def __call__(self, value):
        return self.evaluate(value)

    def evaluate(self, value):
        """Horner evaluation; exact for Fraction/int arguments, float otherwise."""
        acc = Fraction(0) if isinstance(value, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * value + (c if isinstance(value, (int, Fraction)) else float(c))
        return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if k == 0:
                body = str(mag)
            else:
                var = "α" if k == 1 else f"α^{k}"
                if mag == 1:
                    body = var
                elif mag.denominator == 1:
                    body = f"{mag}{var}"
                else:
                    body = f"({mag}){var}"
            if not parts:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"AlphaPolynomial({[str(c) for c in self.coeffs]})"

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "AlphaPolynomial":
        return cls(Fraction(s) for s in data["coeffs"])


def _coerce(value) -> AlphaPolynomial:
    if isinstance(value, AlphaPolynomial):
        return value
    if isinstance(value, (int, Fraction)):
        return AlphaPolynomial.constant(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to AlphaPolynomial")


def factorial_fraction(n: int) -> Fraction:
    out = Fraction(1)
    for j in range(2, n + 1):
        out *= j
    return out
