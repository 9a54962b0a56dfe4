"""
Simulation run queue with concurrent processing control.
"""

import asyncio
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Set

from utils.logger import setup_logger
from utils.progress import ProgressStage, ProgressTracker, format_progress_message


logger = setup_logger()


class TaskStatus(Enum):
    PENDING = 'pending'
    RUNNING = 'running'
    COMPLETED = 'completed'
    FAILED = 'failed'


@dataclass(eq=False)
class RunTask:
    config: Any
    kind: Any
    lambda_: float
    run: int
    seed: int
    status: TaskStatus = TaskStatus.PENDING
    error: Optional[str] = None
    result: Any = None

    @property
    def key(self) -> tuple:
        return (self.lambda_, self.kind, self.run)


class RunQueueManager:
    """Fan simulation runs out to worker coroutines.

    With max_concurrent >= 1 each run executes in a process pool; with 0 the
    runs execute inline on the event loop, one after another.
    """

    def __init__(self, max_concurrent: int = 0, tracker: Optional[ProgressTracker] = None):
        self.max_concurrent = max_concurrent
        self.queue: Optional[asyncio.Queue] = None
        self.active_tasks: Set[RunTask] = set()
        self.semaphore: Optional[asyncio.Semaphore] = None
        self.tracker = tracker
        self.results: Dict[tuple, Any] = {}
        self._workers: list[asyncio.Task] = []
        self._running = False
        self._executor: Optional[Executor] = None

        self.stats = {
            'total_queued': 0, 'total_processed': 0, 'total_failed': 0, 'active': 0,
        }

    async def start(self) -> None:
        # created here so they bind to the running loop
        self.queue = asyncio.Queue()
        self.semaphore = asyncio.Semaphore(max(1, self.max_concurrent))
        self._running = True
        if self.max_concurrent > 0:
            self._executor = ProcessPoolExecutor(max_workers=self.max_concurrent)
        self._workers = [
            asyncio.create_task(self._worker(i), name=f"run_worker_{i}")
            for i in range(max(1, self.max_concurrent))
        ]
        logger.info(f"Run queue started with {len(self._workers)} workers")

    async def stop(self) -> None:
        self._running = False
        for worker in self._workers:
            worker.cancel()
        await asyncio.gather(*self._workers, return_exceptions=True)
        self._workers.clear()
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None
        logger.info("Run queue stopped")

    async def add_to_queue(self, task: RunTask) -> None:
        await self.queue.put(task)
        self.stats['total_queued'] += 1
        logger.debug(f"Run queued: lambda={task.lambda_} {task.kind} run {task.run}. Queue: {self.queue.qsize()}")

    async def run_all(self, tasks: List[RunTask]) -> Dict[tuple, Any]:
        if self.tracker:
            self.tracker.update(stage=ProgressStage.RUNNING, total=len(tasks), done=0)
        await self.start()
        try:
            for task in tasks:
                await self.add_to_queue(task)
            await self.queue.join()
        finally:
            await self.stop()

        failed = [t for t in tasks if t.status == TaskStatus.FAILED]
        if failed:
            if self.tracker:
                self.tracker.set_error(failed[0].error or "run failed")
            raise RuntimeError(f"{len(failed)} simulation runs failed; first error: {failed[0].error}")
        if self.tracker:
            self.tracker.set_completed()
        return self.results

    async def _worker(self, worker_id: int) -> None:
        logger.debug(f"Worker {worker_id} started")
        while self._running:
            try:
                task = await self.queue.get()
                async with self.semaphore:
                    await self._process_task_safely(task, worker_id)
                    self.queue.task_done()
            except asyncio.CancelledError:
                break
            except Exception as e:
                logger.error(f"Worker {worker_id} error: {e}")

    async def _process_task_safely(self, task: RunTask, worker_id: int) -> None:
        from harness.runner import run_once

        self.active_tasks.add(task)
        self.stats['active'] = len(self.active_tasks)
        task.status = TaskStatus.RUNNING
        try:
            if self._executor is None:
                task.result = run_once(task.config, task.kind, task.seed)
            else:
                loop = asyncio.get_running_loop()
                task.result = await loop.run_in_executor(
                    self._executor, run_once, task.config, task.kind, task.seed
                )
            self.results[task.key] = task.result
            task.status = TaskStatus.COMPLETED
            self.stats['total_processed'] += 1
        except Exception as e:
            task.status = TaskStatus.FAILED
            task.error = str(e)
            self.stats['total_failed'] += 1
            logger.error(f"Run failed (lambda={task.lambda_}, run {task.run}): {e}")
        finally:
            self.active_tasks.discard(task)
            self.stats['active'] = len(self.active_tasks)
            if self.tracker:
                self.tracker.advance()
                if self.tracker.should_update_message():
                    logger.info(format_progress_message(self.tracker.get_state(), "Simulation sweep"))
