"""Exact negative binomial / negative multinomial sampling.

Both samplers are exact for any real shape r > 0: a negative binomial is
drawn as a Poisson with Gamma(r, p/(1-p)) mixing intensity, and a negative
multinomial as a negative binomial total split multinomially.  Success
probabilities follow the convention where the mass function carries
(1-p)**r times p**k.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DomainError


def _check_r(r: float) -> float:
    r = float(r)
    if not r > 0:
        raise DomainError("shape parameter must be positive")
    return r


def nb_sample(r: float, p: float, rng: np.random.Generator) -> int:
    """One draw with mass Gamma(k+r)/(Gamma(r) k!) * (1-p)**r * p**k."""
    r = _check_r(r)
    p = float(p)
    if not 0 <= p < 1:
        raise DomainError("success probability must lie in [0, 1)")
    if p == 0:
        return 0
    lam = rng.gamma(shape=r, scale=p / (1 - p))
    return int(rng.poisson(lam))


def nb_sample_many(r, p: float, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Vectorized negative binomial; r may be an array of shapes."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("shape parameters must be positive")
    p = float(p)
    if not 0 <= p < 1:
        raise DomainError("success probability must lie in [0, 1)")
    shape = r.shape if size is None else (size,)
    if p == 0:
        return np.zeros(shape, dtype=np.int64)
    lam = rng.gamma(shape=r, scale=p / (1 - p), size=shape)
    return rng.poisson(lam).astype(np.int64)


def nm_sample(r: float, pvec: Sequence[float], rng: np.random.Generator) -> tuple[int, ...]:
    """One negative multinomial draw: NB total, multinomial split."""
    r = _check_r(r)
    p = np.asarray(pvec, dtype=float)
    if p.size and (np.any(p < 0) or np.any(p >= 1)):
        raise DomainError("component probabilities must lie in [0, 1)")
    total_p = float(p.sum())
    if total_p >= 1:
        raise DomainError("component probabilities must sum below 1")
    if p.size == 0 or total_p == 0:
        return tuple(0 for _ in range(p.size))
    total = nb_sample(r, total_p, rng)
    if total == 0:
        return tuple(0 for _ in range(p.size))
    split = rng.multinomial(total, p / total_p)
    return tuple(int(x) for x in split)


def nm_sample_many(r, pvec: Sequence[float], rng: np.random.Generator) -> np.ndarray:
    """Vectorized negative multinomial: one row of counts per entry of r."""
    r = np.asarray(r, dtype=float)
    p = np.asarray(pvec, dtype=float)
    if p.size and (np.any(p < 0) or np.any(p >= 1)):
        raise DomainError("component probabilities must lie in [0, 1)")
    total_p = float(p.sum())
    if total_p >= 1:
        raise DomainError("component probabilities must sum below 1")
    m = r.shape[0]
    if p.size == 0 or total_p == 0:
        return np.zeros((m, p.size), dtype=np.int64)
    totals = nb_sample_many(r, total_p, rng)
    out = rng.multinomial(totals, p / total_p)
    return out.astype(np.int64)
