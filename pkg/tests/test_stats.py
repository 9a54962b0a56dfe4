import numpy as np
import pandas as pd
import pytest

from harness.stats import Comparison, bootstrap_ci, standard_error, trend_violations


def test_standard_error() -> None:
    assert standard_error([1.0]) == 0.0
    values = [1.0, 2.0, 3.0, 4.0]
    assert standard_error(values) == pytest.approx(np.std(values, ddof=1) / 2)


def test_bootstrap_ci_brackets_mean() -> None:
    values = np.random.default_rng(0).normal(0.3, 0.1, size=80)
    low, high = bootstrap_ci(values, samples=2000, seed=1)
    assert low < values.mean() < high
    assert bootstrap_ci(values, samples=2000, seed=1) == (low, high)


def test_bootstrap_ci_requires_values() -> None:
    with pytest.raises(ValueError):
        bootstrap_ci([])


def test_comparison_dominance() -> None:
    assert Comparison(8.0, 0.7, 0.6, 0.1, 0.02, 0.18).proposed_dominates
    assert not Comparison(8.0, 0.7, 0.69, 0.01, -0.02, 0.04).proposed_dominates


def test_trend_violations() -> None:
    table = pd.DataFrame({
        "lambda": [2.0, 4.0, 6.0, 2.0, 4.0, 6.0],
        "scheduler": ["proposed"] * 3 + ["fcfs"] * 3,
        "mean_index": [0.9, 0.8, 0.95, 0.9, 0.91, 0.7],
        "stderr": [0.01] * 6,
    })
    assert trend_violations(table, "proposed") == [(4.0, 6.0)]
    # 0.01 rise is within two standard errors
    assert trend_violations(table, "fcfs") == []
