import math
from collections import Counter

import pytest

from loopperm import DomainError, empirical_compare
from loopperm.compare import two_sample_compare
from loopperm.errors import ConsistencyError
from loopperm.laws import enumerate_theta_outcomes
from loopperm.soup import collect_soup_stats


def test_requires_enough_samples():
    with pytest.raises(DomainError):
        empirical_compare({}, 10, [((0,), 1.0)])


def test_rejects_overfull_law():
    with pytest.raises(ConsistencyError):
        empirical_compare({}, 5000, [((0,), 0.7), ((1,), 0.5)])


def test_zero_probability_row_passes_when_unsampled():
    counts = Counter({(0,): 5000})
    report = empirical_compare(counts, 5000, [((0,), 1.0), ((1,), 0.0)])
    rows = {tuple(r.outcome): r for r in report.rows}
    assert rows[(1,)].z == 0.0
    assert report.passed


def test_zero_probability_row_fails_when_sampled():
    counts = Counter({(0,): 4999, (1,): 1})
    report = empirical_compare(counts, 5000, [((0,), 1.0), ((1,), 0.0)])
    assert math.isinf(report.max_abs_z)
    assert not report.passed


def test_statistical_contract_on_real_sampler(chain_p2):
    stats = collect_soup_stats(chain_p2, 1.0, seed=123, count=100000)
    outcomes = enumerate_theta_outcomes(chain_p2, 1.0, (5, 5), pmin=1e-4)
    report = empirical_compare(stats.theta, stats.total, outcomes)
    assert report.passed
    assert report.max_abs_z <= 4.0
    assert report.chi_p_value >= 1e-3


def test_negative_control_wrong_alpha_fails(chain_p2):
    # Sample at alpha=1 but score against the law for alpha=1.5: must fail.
    stats = collect_soup_stats(chain_p2, 1.0, seed=321, count=100000)
    wrong = enumerate_theta_outcomes(chain_p2, 1.5, (5, 5), pmin=1e-4)
    report = empirical_compare(stats.theta, stats.total, wrong)
    assert not report.passed


def test_tail_bookkeeping(chain_p2):
    stats = collect_soup_stats(chain_p2, 1.0, seed=55, count=50000)
    outcomes = enumerate_theta_outcomes(chain_p2, 1.0, (1, 1))
    report = empirical_compare(stats.theta, stats.total, outcomes)
    enumerated = sum(r.count for r in report.rows)
    assert report.tail_count == stats.total - enumerated
    assert report.tail_theory == pytest.approx(1 - sum(r.theory for r in report.rows))
    data = report.to_json()
    assert data["total_samples"] == 50000


def test_csv_rows_include_tail(chain_p2):
    stats = collect_soup_stats(chain_p2, 1.0, seed=55, count=50000)
    outcomes = enumerate_theta_outcomes(chain_p2, 1.0, (2, 2))
    report = empirical_compare(stats.theta, stats.total, outcomes)
    rows = report.csv_rows()
    assert rows[-1][0] == "tail"
    assert len(rows) == len(report.rows) + 1


def test_two_sample_same_distribution_passes(chain_p2):
    a = collect_soup_stats(chain_p2, 1.0, seed=777, count=60000)
    b = collect_soup_stats(chain_p2, 1.0, seed=778, count=60000)
    verdict = two_sample_compare(a.theta, a.total, b.theta, b.total)
    assert verdict["passed"]


def test_two_sample_different_distributions_fail(chain_p2):
    a = collect_soup_stats(chain_p2, 1.0, seed=777, count=60000)
    b = collect_soup_stats(chain_p2, 2.0, seed=778, count=60000)
    verdict = two_sample_compare(a.theta, a.total, b.theta, b.total)
    assert not verdict["passed"]
