from harness.population import SimConfig, generate_population, sample_arrivals, sample_tcc
from harness.runner import RunResult, compare_schedulers, run_once, sweep_lambda, write_csv
from harness.stats import Comparison, bootstrap_ci, trend_violations

__all__ = [
    "SimConfig", "generate_population", "sample_arrivals", "sample_tcc",
    "RunResult", "compare_schedulers", "run_once", "sweep_lambda", "write_csv",
    "Comparison", "bootstrap_ci", "trend_violations",
]
