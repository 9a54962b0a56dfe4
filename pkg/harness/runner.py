"""
Monte Carlo runs of the charging contract: one run drives a fresh contract
for `num_slots` slots; a sweep repeats runs over a grid of arrival rates for
both schedulers and reduces them to a table.
"""
import asyncio
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from harness.population import SimConfig, generate_population, run_seed, slot_rng
from harness.stats import Comparison, bootstrap_ci, standard_error
from ledger import contract
from ledger.transactions import SYSTEM_SENDER
from scheduler import SchedulerFactory, SchedulerKind, charging_index
from utils.logger import setup_logger
from utils.progress import ProgressTracker

logger = setup_logger()

CSV_COLUMNS = ["lambda", "scheduler", "mean_index", "stderr", "runs", "seed"]


@dataclass(frozen=True)
class RunResult:
    indices: tuple
    mean_index: float
    scheduler: str
    lambda_: float
    seed: int


def run_once(config: SimConfig, scheduler_kind, seed: int) -> RunResult:
    kind = SchedulerFactory.parse_kind(scheduler_kind)
    # arrivals are admitted directly: simulated ESUs are already authenticated
    state = contract.deploy(SYSTEM_SENDER, config.headroom, 0, "simulation", b"",
                            beta1=config.beta1, beta2=config.beta2,
                            battery_capacity=config.battery_capacity)
    requested: Dict[bytes, int] = {}
    granted: Dict[bytes, int] = defaultdict(int)

    for slot in range(config.num_slots):
        for demand in generate_population(config, slot, slot_rng(seed, slot), seed):
            contract.admit(state, demand.id, demand.power_Pv, demand.soc_Sv, demand.tcc_Kv)
            requested[demand.id] = demand.power_Pv
        state, schedule = contract.run_slot(state, kind)
        for address, power in schedule.granted.items():
            granted[address] += power

    indices = tuple(charging_index(granted[a], requested[a]) for a in requested)
    mean = float(np.mean(indices)) if indices else 1.0
    return RunResult(indices, mean, kind.value, config.arrival_rate_lambda, seed)


def _run_all(config: SimConfig, lambdas: Sequence[float], kinds: Sequence[SchedulerKind],
             workers: int, tracker: Optional[ProgressTracker]) -> Dict[tuple, RunResult]:
    from queue_manager import RunQueueManager, RunTask

    tasks = [
        RunTask(config.with_lambda(lam), kind, lam, run, run_seed(config.rng_seed, run))
        for lam in lambdas for kind in kinds for run in range(config.runs)
    ]
    manager = RunQueueManager(max_concurrent=workers, tracker=tracker)
    return asyncio.run(manager.run_all(tasks))


def sweep_lambda(config: SimConfig, lambdas: Optional[Sequence[float]] = None, workers: int = 0,
                 tracker: Optional[ProgressTracker] = None) -> pd.DataFrame:
    lambdas = list(lambdas if lambdas is not None else config.lambdas)
    if not lambdas:
        raise ValueError("lambdas must not be empty")
    kinds = [SchedulerKind.PROPOSED, SchedulerKind.FCFS]
    results = _run_all(config, lambdas, kinds, workers, tracker)

    rows = []
    for lam in lambdas:
        for kind in kinds:
            means = [results[(lam, kind, run)].mean_index for run in range(config.runs)]
            rows.append({
                "lambda": float(lam),
                "scheduler": kind.value,
                "mean_index": float(np.mean(means)),
                "stderr": standard_error(means),
                "runs": config.runs,
                "seed": config.rng_seed,
            })
    logger.info(f"Sweep finished: {len(rows)} rows over {len(lambdas)} rates")
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def compare_schedulers(config: SimConfig, lambda_: float, workers: int = 0) -> Comparison:
    """Paired comparison on identical workloads, with a bootstrap CI on the mean difference."""
    kinds = [SchedulerKind.PROPOSED, SchedulerKind.FCFS]
    results = _run_all(config, [lambda_], kinds, workers, None)
    proposed = np.array([results[(lambda_, SchedulerKind.PROPOSED, r)].mean_index for r in range(config.runs)])
    fcfs = np.array([results[(lambda_, SchedulerKind.FCFS, r)].mean_index for r in range(config.runs)])
    diffs = proposed - fcfs
    low, high = bootstrap_ci(diffs, config.bootstrap_samples, seed=config.rng_seed)
    return Comparison(float(lambda_), float(proposed.mean()), float(fcfs.mean()),
                      float(diffs.mean()), low, high)


def write_csv(table: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=False, float_format="%.6f", lineterminator="\n")
    return path


def summarize(table: pd.DataFrame) -> List[str]:
    return [
        f"lambda={row['lambda']:g} {row['scheduler']:<8} mean index {row['mean_index']:.4f} "
        f"(se {row['stderr']:.4f}, {row['runs']} runs)"
        for row in table.to_dict("records")
    ]
