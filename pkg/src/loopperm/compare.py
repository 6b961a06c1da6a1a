"""Empirical-versus-theoretical comparison of sampled outcome distributions.

Given outcome counts from a sampler and an enumerated theoretical law, this
builds a per-outcome table of frequencies, standard errors and z-scores,
plus one chi-square statistic over the outcomes with enough expected mass
(everything else pooled into the declared tail).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from scipy.stats import chi2

from .errors import ConsistencyError, DomainError

Z_THRESHOLD = 4.0
CHI_P_THRESHOLD = 1e-3
MIN_EXPECTED = 5.0
MIN_SAMPLES = 1000


@dataclass
class LawRow:
    outcome: object
    theory: float
    count: int
    empirical: float
    std_err: float
    z: float

    def to_json(self) -> dict:
        return {
            "outcome": _outcome_json(self.outcome),
            "theory": self.theory,
            "count": self.count,
            "empirical": self.empirical,
            "std_err": self.std_err,
            "z": self.z,
        }


@dataclass
class LawReport:
    total_samples: int
    rows: list[LawRow] = field(default_factory=list)
    tail_theory: float = 0.0
    tail_count: int = 0
    chi_square: float = 0.0
    chi_df: int = 0
    chi_p_value: float = 1.0
    max_abs_z: float = 0.0
    z_threshold: float = Z_THRESHOLD
    p_threshold: float = CHI_P_THRESHOLD
    passed: bool = True

    def to_json(self) -> dict:
        return {
            "total_samples": self.total_samples,
            "tail_theory": self.tail_theory,
            "tail_count": self.tail_count,
            "chi_square": self.chi_square,
            "chi_df": self.chi_df,
            "chi_p_value": self.chi_p_value,
            "max_abs_z": self.max_abs_z,
            "z_threshold": self.z_threshold,
            "p_threshold": self.p_threshold,
            "passed": self.passed,
            "rows": [r.to_json() for r in self.rows],
        }

    def csv_rows(self) -> list[tuple[str, float, float]]:
        out = [(_outcome_text(r.outcome), r.theory, r.empirical) for r in self.rows]
        tail_emp = self.tail_count / self.total_samples if self.total_samples else 0.0
        out.append(("tail", self.tail_theory, tail_emp))
        return out


def empirical_compare(counts: Mapping, total: int,
                      outcomes: Sequence[tuple[object, float]],
                      z_threshold: float = Z_THRESHOLD,
                      p_threshold: float = CHI_P_THRESHOLD,
                      min_expected: float = MIN_EXPECTED) -> LawReport:
    """Score sampled counts against an enumerated law.

    ``outcomes`` lists (key, probability) pairs; keys missing from ``counts``
    count as zero.  Probability mass not enumerated is the declared tail; the
    enumerated probabilities plus the tail must form a distribution.
    """
    if total < MIN_SAMPLES:
        raise DomainError(f"need at least {MIN_SAMPLES} samples, got {total}")
    theory_sum = math.fsum(p for _, p in outcomes)
    if theory_sum > 1 + 1e-9:
        raise ConsistencyError(
            f"enumerated probabilities sum to {theory_sum}, above 1"
        )
    tail_theory = max(0.0, 1.0 - theory_sum)
    report = LawReport(total_samples=total, tail_theory=tail_theory,
                       z_threshold=z_threshold, p_threshold=p_threshold)
    seen = 0
    chi_cells: list[tuple[float, float]] = []  # (observed, expected)
    pooled_obs = 0.0
    pooled_exp = total * tail_theory
    for key, p in outcomes:
        observed = int(counts.get(key, 0))
        seen += observed
        freq = observed / total
        se = math.sqrt(p * (1.0 - p) / total) if 0.0 < p < 1.0 else 0.0
        if se > 0:
            z = (freq - p) / se
        else:
            z = 0.0 if freq == p else math.inf
        report.rows.append(LawRow(outcome=key, theory=p, count=observed,
                                  empirical=freq, std_err=se, z=z))
        report.max_abs_z = max(report.max_abs_z, abs(z))
        expected = total * p
        if expected >= min_expected:
            chi_cells.append((observed, expected))
        else:
            pooled_obs += observed
            pooled_exp += expected
    report.tail_count = total - seen
    pooled_obs += report.tail_count
    if pooled_exp > 0:
        chi_cells.append((pooled_obs, pooled_exp))
    elif pooled_obs > 0:
        # Outcomes were sampled that the law declares impossible.
        report.max_abs_z = math.inf
    if len(chi_cells) >= 2:
        report.chi_square = math.fsum(
            (obs - exp) ** 2 / exp for obs, exp in chi_cells if exp > 0
        )
        report.chi_df = len(chi_cells) - 1
        report.chi_p_value = float(chi2.sf(report.chi_square, report.chi_df))
    report.passed = (report.max_abs_z <= z_threshold
                     and report.chi_p_value >= p_threshold)
    return report


def two_sample_compare(counts_a: Mapping, total_a: int,
                       counts_b: Mapping, total_b: int,
                       min_expected: float = MIN_EXPECTED,
                       p_threshold: float = CHI_P_THRESHOLD) -> dict:
    """Homogeneity chi-square between two samplers of the same outcome space.

    Outcomes whose pooled expected count falls below the floor are pooled
    into one cell.
    """
    if total_a < MIN_SAMPLES or total_b < MIN_SAMPLES:
        raise DomainError(f"need at least {MIN_SAMPLES} samples per side")
    grand = total_a + total_b
    keys = sorted(set(counts_a) | set(counts_b))
    cells: list[tuple[int, int]] = []
    pool_a = pool_b = 0
    for key in keys:
        a = int(counts_a.get(key, 0))
        b = int(counts_b.get(key, 0))
        col = a + b
        if total_a * col / grand >= min_expected and total_b * col / grand >= min_expected:
            cells.append((a, b))
        else:
            pool_a += a
            pool_b += b
    if pool_a + pool_b:
        cells.append((pool_a, pool_b))
    stat = 0.0
    for a, b in cells:
        col = a + b
        ea = total_a * col / grand
        eb = total_b * col / grand
        if ea > 0:
            stat += (a - ea) ** 2 / ea
        if eb > 0:
            stat += (b - eb) ** 2 / eb
    df = max(len(cells) - 1, 1)
    p_value = float(chi2.sf(stat, df))
    return {
        "chi_square": stat,
        "chi_df": df,
        "chi_p_value": p_value,
        "cells": len(cells),
        "p_threshold": p_threshold,
        "passed": p_value >= p_threshold,
    }


def _outcome_json(outcome):
    if isinstance(outcome, tuple) and outcome and isinstance(outcome[0], tuple):
        return [list(row) for row in outcome]
    if isinstance(outcome, tuple):
        return list(outcome)
    return outcome


def _outcome_text(outcome) -> str:
    if isinstance(outcome, tuple) and outcome and isinstance(outcome[0], tuple):
        return ";".join(" ".join(str(x) for x in row) for row in outcome)
    if isinstance(outcome, tuple):
        return " ".join(str(x) for x in outcome)
    return str(outcome)
