from scheduler.priority import EsuDemand, Priority, SchedulerParams, f_of_tcc, priority
from scheduler.knapsack import SlotSchedule, charging_index, rank, schedule_slot, schedule_slot_fcfs
from scheduler.factory import SchedulerFactory, SchedulerKind

__all__ = [
    "EsuDemand", "Priority", "SchedulerParams", "f_of_tcc", "priority",
    "SlotSchedule", "charging_index", "rank", "schedule_slot", "schedule_slot_fcfs",
    "SchedulerFactory", "SchedulerKind",
]
