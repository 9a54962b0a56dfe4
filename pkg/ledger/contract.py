"""
The charging-coordination contract.

Holds the ESU records submitted during the current slot and runs the
scheduler when a slot trigger arrives. Execution functions mutate the state
they are given and return it with a Receipt; a rejected transaction leaves
the state untouched.
"""
import datetime
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from credentials import group
from credentials.keys import derive_address, verify_request, verify_signature
from credentials.pbs import CommonMessage, token_fresh, verify_token
from errors import ValidationError
from ledger import codec
from ledger.transactions import (SYSTEM_SENDER, DeployPayload, LoadPostPayload, RequestPayload,
                                 SlotTriggerPayload, Transaction, TxKind)
from scheduler import EsuDemand, SchedulerFactory, SchedulerKind, SchedulerParams, SlotSchedule, priority
from utils.logger import setup_logger

logger = setup_logger()

ACCEPTED = 'accepted'
REJECTED = 'rejected'


@dataclass
class EsuRecord:
    power_Pv: int
    tcc_Kv: int
    soc_Sv: int
    priority_U: int
    arrival_seq: int
    xv: int = 0
    scheduled_power: int = 0

    def to_item(self, address: bytes) -> list:
        return [address, self.power_Pv, self.tcc_Kv, self.soc_Sv, self.priority_U,
                self.arrival_seq, self.xv, self.scheduled_power]


@dataclass
class ContractState:
    owner: bytes
    utility_pk: bytes
    capacity_C: int
    regular_load_PR: int
    max_capacity: int
    community_ID_g: str
    current_date: datetime.date
    beta1: int = 500
    beta2: int = 500
    battery_capacity: int = 200
    period_days: int = 7
    current_slot: int = 0
    next_seq: int = 0
    esu_records: Dict[bytes, EsuRecord] = field(default_factory=dict)
    esu_order: List[bytes] = field(default_factory=list)
    spent_pseudonyms: Set[bytes] = field(default_factory=set)

    @property
    def params(self) -> SchedulerParams:
        return SchedulerParams(self.beta1, self.beta2, self.capacity_C, self.regular_load_PR)

    def demands(self) -> List[EsuDemand]:
        return [
            EsuDemand(a, r.power_Pv, r.soc_Sv, r.tcc_Kv, r.arrival_seq)
            for a, r in ((a, self.esu_records[a]) for a in self.esu_order)
        ]

    def encode(self) -> bytes:
        """Canonical serialization; maps and sets are sorted by address."""
        return codec.encode([
            self.owner, self.utility_pk, self.capacity_C, self.regular_load_PR, self.max_capacity,
            self.community_ID_g.encode("utf-8"), codec.date_bytes(self.current_date),
            self.beta1, self.beta2, self.battery_capacity, self.period_days,
            self.current_slot, self.next_seq,
            [self.esu_records[a].to_item(a) for a in sorted(self.esu_records)],
            list(self.esu_order),
            sorted(self.spent_pseudonyms),
        ])

    def state_root(self) -> bytes:
        return codec.digest(self.encode())


@dataclass(frozen=True)
class Receipt:
    status: str
    reason: str = ""
    schedule: Optional[SlotSchedule] = None

    @property
    def accepted(self) -> bool:
        return self.status == ACCEPTED

    def to_item(self) -> list:
        if self.schedule is None:
            schedule_item = []
        else:
            s = self.schedule
            schedule_item = [
                [[a, s.granted[a]] for a in sorted(s.granted)],
                sorted(s.fully_scheduled),
                s.partially_scheduled or b"",
                list(s.deferred),
            ]
        return [self.status.encode(), self.reason.encode("utf-8"), schedule_item]

    @classmethod
    def from_item(cls, item) -> "Receipt":
        status, reason, schedule_item = codec.as_list(item, 3)
        schedule = None
        if codec.as_list(schedule_item):
            granted, full, partial, deferred = codec.as_list(schedule_item, 4)
            schedule = SlotSchedule(
                granted={codec.as_bytes(a): codec.as_int(p) for a, p in (codec.as_list(g, 2) for g in granted)},
                fully_scheduled={codec.as_bytes(a) for a in codec.as_list(full)},
                partially_scheduled=codec.as_bytes(partial) or None,
                deferred=[codec.as_bytes(a) for a in codec.as_list(deferred)],
            )
        return cls(codec.as_text(status), codec.as_text(reason), schedule)


def rejected(reason: str) -> Receipt:
    logger.info(f"Transaction rejected: {reason}")
    return Receipt(REJECTED, reason)


def deploy(owner: bytes, capacity_C: int, regular_load_PR: int, community: str, utility_pk: bytes,
           start_date: Optional[datetime.date] = None, beta1: int = 500, beta2: int = 500,
           battery_capacity: int = 200, period_days: int = 7) -> ContractState:
    """Constructor: MaxCapacity <- C - PR."""
    SchedulerParams(beta1, beta2, capacity_C, regular_load_PR).validate()
    if battery_capacity <= 0 or period_days <= 0:
        raise ValidationError("battery_capacity and period_days must be positive")
    if not community:
        raise ValidationError("community must not be empty")
    return ContractState(
        owner=owner,
        utility_pk=utility_pk,
        capacity_C=capacity_C,
        regular_load_PR=regular_load_PR,
        max_capacity=capacity_C - regular_load_PR,
        community_ID_g=community,
        current_date=start_date or datetime.date(1970, 1, 1),
        beta1=beta1,
        beta2=beta2,
        battery_capacity=battery_capacity,
        period_days=period_days,
    )


def deploy_from_tx(tx: Transaction) -> ContractState:
    payload = DeployPayload.decode(tx.payload)
    if derive_address(payload.utility_pk) != tx.sender_address:
        raise ValidationError("deployer address does not match the utility key")
    if not verify_signature(payload.utility_pk, tx.payload, tx.signature):
        raise ValidationError("invalid deployer signature")
    return deploy(tx.sender_address, payload.capacity_C, payload.regular_load_PR, payload.community_ID_g,
                  payload.utility_pk, payload.start_date, payload.beta1, payload.beta2,
                  payload.battery_capacity, payload.period_days)


def demand_error(power_Pv: int, soc_Sv: int, tcc_Kv: int) -> Optional[str]:
    try:
        EsuDemand(b"", power_Pv, soc_Sv, tcc_Kv, 0).validate()
    except ValidationError as e:
        return str(e)
    return None


def authorization_error(state: ContractState, sender: bytes, payload: RequestPayload,
                        signature: bytes) -> Optional[str]:
    """Reason a request is not authorized, or None."""
    if sender in state.spent_pseudonyms:
        return "pseudonym already used"
    if derive_address(payload.pseudonym_pk) != sender:
        return "sender does not match pseudonym key"
    if payload.community_ID_g != state.community_ID_g:
        return "request for another community"
    if payload.ts != payload.token.common.date_TS:
        return "request date does not match token"
    if not token_fresh(payload.token, state.current_date, state.period_days):
        return "token outside its issuance period"
    if not verify_request(payload.pseudonym_pk, payload.encode(), signature):
        return "invalid request signature"
    try:
        utility_point = group.point_from_bytes(state.utility_pk)
    except ValueError:
        return "contract has an invalid utility key"
    expected = CommonMessage(payload.ts, state.community_ID_g)
    if not verify_token(payload.token, payload.pseudonym_pk, utility_point, expected):
        return "invalid token"
    return None


def is_authorized(state: ContractState, sender: bytes, payload: RequestPayload, signature: bytes) -> bool:
    return authorization_error(state, sender, payload, signature) is None


def admit(state: ContractState, address: bytes, power_Pv: int, soc_Sv: int, tcc_Kv: int) -> EsuRecord:
    """Store an authorized request and burn its pseudonym."""
    seq = state.next_seq
    demand = EsuDemand(address, power_Pv, soc_Sv, tcc_Kv, seq).validate()
    record = EsuRecord(power_Pv, tcc_Kv, soc_Sv, priority(demand, state.params).value_U, seq)
    state.esu_records[address] = record
    state.esu_order.append(address)
    state.spent_pseudonyms.add(address)
    state.next_seq += 1
    return record


def receive_charging_request(state: ContractState, tx: Transaction) -> Tuple[ContractState, Receipt]:
    if tx.kind != TxKind.CHARGING_REQUEST:
        return state, rejected("not a charging request")
    try:
        payload = RequestPayload.decode(tx.payload)
    except ValueError as e:
        return state, rejected(f"malformed payload: {e}")
    error = demand_error(payload.power_Pv, payload.soc_Sv, payload.tcc_Kv)
    if error:
        return state, rejected(error)
    error = authorization_error(state, tx.sender_address, payload, tx.signature)
    if error:
        return state, rejected(error)

    record = admit(state, tx.sender_address, payload.power_Pv, payload.soc_Sv, payload.tcc_Kv)
    logger.info(f"Accepted request from {tx.sender_address.hex()} with priority {record.priority_U}")
    return state, Receipt(ACCEPTED)


def post_utility_load(state: ContractState, tx: Transaction) -> Tuple[ContractState, Receipt]:
    if tx.kind != TxKind.UTILITY_LOAD_POST:
        return state, rejected("not a load post")
    if tx.sender_address != state.owner:
        return state, rejected("load post from a non-utility address")
    if not verify_signature(state.utility_pk, tx.payload, tx.signature):
        return state, rejected("invalid utility signature")
    try:
        payload = LoadPostPayload.decode(tx.payload)
    except ValueError as e:
        return state, rejected(f"malformed payload: {e}")
    if payload.regular_load_PR > state.capacity_C:
        return state, rejected(
            f"regular_load_PR ({payload.regular_load_PR}) exceeds capacity_C ({state.capacity_C})"
        )
    # last write wins until the next slot trigger
    state.regular_load_PR = payload.regular_load_PR
    state.max_capacity = state.capacity_C - state.regular_load_PR
    logger.info(f"Utility posted PR={payload.regular_load_PR}, headroom {state.max_capacity} kW")
    return state, Receipt(ACCEPTED)


def run_slot(state: ContractState, kind=SchedulerKind.PROPOSED) -> Tuple[ContractState, SlotSchedule]:
    scheduler = SchedulerFactory.get_scheduler(kind)
    schedule = scheduler(state.demands(), state.params)

    carried: List[bytes] = []
    for address in state.esu_order:
        record = state.esu_records[address]
        grant = schedule.granted.get(address, 0)
        record.scheduled_power = grant
        if address in schedule.fully_scheduled:
            record.xv = 1
            del state.esu_records[address]
            continue
        record.xv = 0
        record.power_Pv -= grant
        record.tcc_Kv = max(1, record.tcc_Kv - 1)
        record.soc_Sv = min(999, record.soc_Sv + grant * 1000 // state.battery_capacity)
        demand = EsuDemand(address, record.power_Pv, record.soc_Sv, record.tcc_Kv, record.arrival_seq)
        record.priority_U = priority(demand, state.params).value_U
        carried.append(address)

    state.esu_order = carried
    state.current_slot += 1
    state.max_capacity = state.capacity_C - state.regular_load_PR
    logger.info(
        f"Slot {state.current_slot - 1}: granted {schedule.total_granted} kW, "
        f"{len(carried)} requests carried over"
    )
    return state, schedule


def trigger_slot(state: ContractState, tx: Transaction, kind=SchedulerKind.PROPOSED) -> Tuple[ContractState, Receipt]:
    if tx.kind != TxKind.SLOT_TRIGGER:
        return state, rejected("not a slot trigger")
    if tx.sender_address != SYSTEM_SENDER:
        return state, rejected("slot trigger from a non-system sender")
    try:
        payload = SlotTriggerPayload.decode(tx.payload)
    except ValueError as e:
        return state, rejected(f"malformed payload: {e}")
    if payload.slot != state.current_slot:
        return state, rejected(f"trigger for slot {payload.slot}, contract is at slot {state.current_slot}")
    if payload.date < state.current_date:
        return state, rejected("trigger date is in the past")
    state.current_date = payload.date
    state, schedule = run_slot(state, kind)
    return state, Receipt(ACCEPTED, schedule=schedule)
