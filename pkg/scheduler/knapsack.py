"""
Per-slot charging schedule.

The proposed scheduler walks ESUs in descending priority-per-kW order and
grants full demands while they fit; leftover capacity goes to the first ESU
that did not fit. The FCFS baseline walks in arrival order instead.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Dict, Iterable, List, Optional, Set

from errors import ValidationError
from scheduler.priority import EsuDemand, SchedulerParams, priority
from utils.logger import setup_logger

logger = setup_logger()


@dataclass
class SlotSchedule:
    granted: Dict[bytes, int] = field(default_factory=dict)
    fully_scheduled: Set[bytes] = field(default_factory=set)
    partially_scheduled: Optional[bytes] = None
    deferred: List[bytes] = field(default_factory=list)

    @property
    def total_granted(self) -> int:
        return sum(self.granted.values())

    def is_empty(self) -> bool:
        return not self.granted and not self.deferred


def _compare(a: tuple, b: tuple) -> int:
    # entries are (U, P, seq); compare U_a/P_a with U_b/P_b without dividing
    left = a[0] * b[1]
    right = b[0] * a[1]
    if left != right:
        return -1 if left > right else 1
    return -1 if a[2] < b[2] else (1 if a[2] > b[2] else 0)


def rank(demands: List[EsuDemand], params: SchedulerParams) -> List[bytes]:
    entries = [(priority(d, params).value_U, d.power_Pv, d.arrival_seq, d.id) for d in demands]
    entries.sort(key=cmp_to_key(_compare))
    return [e[3] for e in entries]


def _fill(order: Iterable[EsuDemand], available: int, skip_ahead: bool = True) -> SlotSchedule:
    """Grant full demands in `order`; the first misfit takes the remainder.

    With skip_ahead=False the walk stops granting at the first misfit, which
    is how a first-come-first-serve queue behaves.
    """
    schedule = SlotSchedule()
    remaining = available
    skipped: List[EsuDemand] = []

    for demand in order:
        if (skip_ahead or not skipped) and demand.power_Pv <= remaining:
            schedule.granted[demand.id] = demand.power_Pv
            schedule.fully_scheduled.add(demand.id)
            remaining -= demand.power_Pv
        else:
            skipped.append(demand)

    if skipped and remaining > 0:
        first = skipped[0]
        schedule.granted[first.id] = remaining
        schedule.partially_scheduled = first.id
        remaining = 0

    schedule.deferred = [d.id for d in skipped]
    return schedule


def schedule_slot(demands: List[EsuDemand], params: SchedulerParams) -> SlotSchedule:
    if not demands:
        return SlotSchedule()
    by_id = {d.id: d for d in demands}
    ordered = [by_id[a] for a in rank(demands, params)]
    schedule = _fill(ordered, params.available)
    logger.debug(
        f"Proposed schedule: {len(schedule.fully_scheduled)} full, "
        f"{len(schedule.deferred)} deferred, {schedule.total_granted}/{params.available} kW"
    )
    return schedule


def schedule_slot_fcfs(demands: List[EsuDemand], params: SchedulerParams) -> SlotSchedule:
    if not demands:
        return SlotSchedule()
    ordered = sorted(demands, key=lambda d: d.arrival_seq)
    return _fill(ordered, params.available, skip_ahead=False)


def charging_index(granted_total: int, requested_total: int) -> float:
    """Share of the requested energy an ESU actually received."""
    if requested_total <= 0:
        raise ValidationError(f"requested_total must be positive, got: {requested_total}")
    if not 0 <= granted_total <= requested_total:
        raise ValidationError(
            f"granted_total must be in [0, {requested_total}], got: {granted_total}"
        )
    return float(Fraction(granted_total, requested_total))
