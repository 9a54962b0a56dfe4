from enum import Enum
from typing import Callable, List

from errors import ValidationError
from scheduler.knapsack import SlotSchedule, schedule_slot, schedule_slot_fcfs
from scheduler.priority import EsuDemand, SchedulerParams
from utils.logger import setup_logger

logger = setup_logger()

Scheduler = Callable[[List[EsuDemand], SchedulerParams], SlotSchedule]


class SchedulerKind(Enum):
    PROPOSED = 'proposed'
    FCFS = 'fcfs'


class SchedulerFactory:
    _SCHEDULERS = {
        SchedulerKind.PROPOSED: schedule_slot,
        SchedulerKind.FCFS: schedule_slot_fcfs,
    }

    @classmethod
    def parse_kind(cls, value) -> SchedulerKind:
        if isinstance(value, SchedulerKind):
            return value
        try:
            return SchedulerKind(str(value).lower())
        except ValueError:
            raise ValidationError(f"Unknown scheduler '{value}', expected one of: proposed, fcfs")

    @classmethod
    def get_scheduler(cls, kind) -> Scheduler:
        kind = cls.parse_kind(kind)
        logger.debug(f"{kind.value} scheduler selected")
        return cls._SCHEDULERS[kind]
