import asyncio

import pytest

from harness.population import SimConfig
from harness.runner import run_once
from queue_manager import RunQueueManager, RunTask, TaskStatus
from scheduler import SchedulerKind
from utils.progress import ProgressStage, ProgressTracker


def _config() -> SimConfig:
    return SimConfig(num_slots=3, initial_esus=3, runs=1, arrival_rate_lambda=2.0).validate()


def test_inline_queue_runs_every_task() -> None:
    config = _config()
    tasks = [RunTask(config, kind, 2.0, run, seed=run) for kind in SchedulerKind for run in range(3)]
    tracker = ProgressTracker()
    manager = RunQueueManager(max_concurrent=0, tracker=tracker)
    results = asyncio.run(manager.run_all(tasks))

    assert set(results) == {t.key for t in tasks}
    assert all(t.status == TaskStatus.COMPLETED for t in tasks)
    assert results[(2.0, SchedulerKind.FCFS, 1)] == run_once(config, SchedulerKind.FCFS, 1)
    assert manager.stats['total_processed'] == 6
    assert manager.stats['active'] == 0
    assert tracker.get_state().stage == ProgressStage.COMPLETED


def test_failed_run_is_reported() -> None:
    config = _config()
    tasks = [RunTask(config, SchedulerKind.PROPOSED, 2.0, 0, 1), RunTask(config, "lottery", 2.0, 1, 1)]
    tracker = ProgressTracker()
    manager = RunQueueManager(tracker=tracker)
    with pytest.raises(RuntimeError, match="1 simulation runs failed"):
        asyncio.run(manager.run_all(tasks))
    assert tasks[0].status == TaskStatus.COMPLETED
    assert tasks[1].status == TaskStatus.FAILED
    assert "Unknown scheduler" in tasks[1].error
    assert tracker.get_state().stage == ProgressStage.FAILED
