import dataclasses
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from errors import ConfigError
from harness.population import SimConfig
from harness.runner import compare_schedulers, summarize, sweep_lambda, write_csv
from harness.stats import trend_violations
from utils.logger import setup_logger
from utils.progress import ProgressTracker, format_progress_message

logger = setup_logger()


def load_sim_config(config_path: Optional[Union[str, Path]] = None, seed: Optional[int] = None) -> SimConfig:
    config = SimConfig.from_json(config_path) if config_path else SimConfig().validate()
    if seed is not None:
        config = dataclasses.replace(config, rng_seed=seed).validate()
    return config


def cmd_simulate(config_path: Optional[Union[str, Path]], out_csv: Union[str, Path],
                 seed: Optional[int] = None, workers: int = 0, compare: bool = False) -> pd.DataFrame:
    if workers < 0:
        raise ConfigError(f"workers must be >= 0, got: {workers}")
    config = load_sim_config(config_path, seed)
    logger.info(f"Simulating {len(config.lambdas)} rates x 2 schedulers x {config.runs} runs, seed {config.rng_seed}")

    tracker = ProgressTracker()
    table = sweep_lambda(config, workers=workers, tracker=tracker)
    path = write_csv(table, out_csv)

    for line in summarize(table):
        print(line)
    for scheduler in table["scheduler"].unique():
        for low, high in trend_violations(table, scheduler):
            logger.warning(f"{scheduler}: mean index rises between lambda={low:g} and lambda={high:g}")

    if compare:
        for lam in config.lambdas:
            result = compare_schedulers(config, lam, workers=workers)
            verdict = "proposed >= fcfs" if result.proposed_dominates else "inconclusive"
            print(f"lambda={lam:g} difference {result.mean_difference:+.4f} "
                  f"95% CI [{result.ci_low:+.4f}, {result.ci_high:+.4f}] {verdict}")

    print(format_progress_message(tracker.get_state(), "Simulation sweep"))
    print(f"wrote {len(table)} rows to {path}")
    return table
