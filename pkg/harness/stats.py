from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import pandas as pd


def standard_error(values: Sequence[float]) -> float:
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return 0.0
    return float(values.std(ddof=1) / np.sqrt(values.size))


def bootstrap_ci(values: Sequence[float], samples: int = 2000, seed: int = 0,
                 level: float = 0.95) -> Tuple[float, float]:
    """Percentile bootstrap interval for the mean."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("bootstrap needs at least one value")
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, values.size, size=(samples, values.size))
    means = values[picks].mean(axis=1)
    tail = (1.0 - level) / 2.0
    low, high = np.quantile(means, [tail, 1.0 - tail])
    return float(low), float(high)


@dataclass(frozen=True)
class Comparison:
    lambda_: float
    proposed_mean: float
    fcfs_mean: float
    mean_difference: float
    ci_low: float
    ci_high: float

    @property
    def proposed_dominates(self) -> bool:
        return self.ci_low >= 0.0


def trend_violations(table: pd.DataFrame, scheduler: str, tolerance_se: float = 2.0) -> List[Tuple[float, float]]:
    """Adjacent rate pairs where the mean index rises by more than `tolerance_se` standard errors."""
    rows = table[table["scheduler"] == scheduler].sort_values("lambda")
    lambdas = rows["lambda"].tolist()
    means = rows["mean_index"].tolist()
    errors = rows["stderr"].tolist()
    violations = []
    for i in range(1, len(lambdas)):
        allowed = tolerance_se * max(errors[i - 1], errors[i])
        if means[i] - means[i - 1] > allowed:
            violations.append((lambdas[i - 1], lambdas[i]))
    return violations
