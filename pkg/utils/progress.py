"""
Thread-safe progress tracking with terminal-friendly progress bars.
"""
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class ProgressStage(Enum):
    IDLE = "idle"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class ProgressState:
    """Current progress state snapshot."""
    stage: ProgressStage = ProgressStage.IDLE
    done: int = 0
    total: int = 0
    error: Optional[str] = None
    completed: bool = False
    last_update: float = field(default_factory=time.time)

    @property
    def progress(self) -> float:
        if self.total <= 0:
            return 100.0 if self.completed else 0.0
        return min(100.0, 100.0 * self.done / self.total)


class ProgressTracker:
    """
    Progress of a batch of simulation runs, updated from queue workers and
    read from the CLI thread.
    """
    def __init__(self, throttle_seconds: float = 1.0):
        self._state = ProgressState()
        self._lock = threading.Lock()
        self._throttle_seconds = throttle_seconds
        self._last_message_update = 0.0

    def update(
        self,
        stage: Optional[ProgressStage] = None,
        done: Optional[int] = None,
        total: Optional[int] = None,
        error: Optional[str] = None,
        completed: Optional[bool] = None
    ) -> None:
        with self._lock:
            if stage is not None: self._state.stage = stage
            if done is not None: self._state.done = max(0, done)
            if total is not None: self._state.total = max(0, total)
            if error is not None:
                self._state.error = error
                self._state.stage = ProgressStage.FAILED
            if completed is not None:
                self._state.completed = completed
                if completed and self._state.stage != ProgressStage.FAILED:
                    self._state.stage = ProgressStage.COMPLETED
            self._state.last_update = time.time()

    def advance(self, count: int = 1) -> None:
        with self._lock:
            self._state.done += count
            self._state.last_update = time.time()

    def get_state(self) -> ProgressState:
        """Get current state as a thread-safe copy."""
        with self._lock:
            return ProgressState(
                stage=self._state.stage,
                done=self._state.done,
                total=self._state.total,
                error=self._state.error,
                completed=self._state.completed,
                last_update=self._state.last_update
            )

    def should_update_message(self) -> bool:
        current_time = time.time()
        with self._lock:
            if current_time - self._last_message_update >= self._throttle_seconds:
                self._last_message_update = current_time
                return True
            return False

    def set_error(self, error_message: str) -> None:
        self.update(error=error_message, completed=True)

    def set_completed(self) -> None:
        with self._lock:
            self._state.done = self._state.total
        self.update(completed=True)


def generate_progress_bar(progress: float, length: int = 20) -> str:
    """Generate a text-based progress bar [####....]."""
    progress = min(100.0, max(0.0, progress))
    filled = int(progress / 100 * length)
    bar = "#" * filled + "." * (length - filled)
    return f"[{bar}] {progress:.1f}%"


def format_progress_message(state: ProgressState, title: str) -> str:
    display_title = title[:40] + "..." if len(title) > 40 else title

    if state.stage == ProgressStage.FAILED:
        return f"{display_title}: failed ({state.error or 'unknown error'})"
    if state.stage == ProgressStage.COMPLETED:
        return f"{display_title}: done, {state.total} runs"
    if state.stage == ProgressStage.RUNNING:
        return f"{display_title}: {generate_progress_bar(state.progress)} {state.done}/{state.total} runs"
    return f"{display_title}: waiting"
