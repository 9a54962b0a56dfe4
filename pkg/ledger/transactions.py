"""
Ledger transactions and their payloads.

A transaction is RLP [kind, sender, payload, signature]. Payloads are RLP
lists whose layout depends on the kind; signatures cover the payload bytes.
"""
import datetime
from dataclasses import dataclass
from enum import IntEnum
from typing import Optional

from credentials.keys import ADDRESS_SIZE, KeyPair, PseudonymKeyPair, UtilityKeyPair, sign_request
from credentials.pbs import Token
from ledger import codec

SYSTEM_SENDER = b"\x00" * ADDRESS_SIZE


class TxKind(IntEnum):
    CONTRACT_DEPLOY = 0
    CHARGING_REQUEST = 1
    UTILITY_LOAD_POST = 2
    SLOT_TRIGGER = 3


@dataclass(frozen=True)
class Transaction:
    kind: TxKind
    sender_address: bytes
    payload: bytes
    signature: bytes = b""

    def to_item(self) -> list:
        return [int(self.kind), self.sender_address, self.payload, self.signature]

    @classmethod
    def from_item(cls, item) -> "Transaction":
        kind, sender, payload, signature = codec.as_list(item, 4)
        return cls(TxKind(codec.as_int(kind)), codec.as_bytes(sender),
                   codec.as_bytes(payload), codec.as_bytes(signature))

    def encode(self) -> bytes:
        return codec.encode(self.to_item())

    @classmethod
    def decode(cls, data: bytes) -> "Transaction":
        return cls.from_item(codec.decode(data))

    @property
    def tx_hash(self) -> bytes:
        return codec.digest(self.encode())


@dataclass(frozen=True)
class RequestPayload:
    power_Pv: int
    soc_Sv: int
    tcc_Kv: int
    ts: datetime.date
    community_ID_g: str
    pseudonym_pk: bytes
    token: Token

    def encode(self) -> bytes:
        return codec.encode([
            self.power_Pv, self.soc_Sv, self.tcc_Kv, codec.date_bytes(self.ts),
            self.community_ID_g.encode("utf-8"), self.pseudonym_pk, self.token.encode(),
        ])

    @classmethod
    def decode(cls, data: bytes) -> "RequestPayload":
        pv, sv, kv, ts, community, pk, token = codec.as_list(codec.decode(data), 7)
        return cls(codec.as_int(pv), codec.as_int(sv), codec.as_int(kv), codec.as_date(ts),
                   codec.as_text(community), codec.as_bytes(pk), Token.decode(codec.as_bytes(token)))


@dataclass(frozen=True)
class LoadPostPayload:
    regular_load_PR: int

    def encode(self) -> bytes:
        return codec.encode([self.regular_load_PR])

    @classmethod
    def decode(cls, data: bytes) -> "LoadPostPayload":
        (pr,) = codec.as_list(codec.decode(data), 1)
        return cls(codec.as_int(pr))


@dataclass(frozen=True)
class SlotTriggerPayload:
    slot: int
    date: datetime.date

    def encode(self) -> bytes:
        return codec.encode([self.slot, codec.date_bytes(self.date)])

    @classmethod
    def decode(cls, data: bytes) -> "SlotTriggerPayload":
        slot, date = codec.as_list(codec.decode(data), 2)
        return cls(codec.as_int(slot), codec.as_date(date))


@dataclass(frozen=True)
class DeployPayload:
    capacity_C: int
    regular_load_PR: int
    community_ID_g: str
    utility_pk: bytes
    start_date: datetime.date
    beta1: int = 500
    beta2: int = 500
    battery_capacity: int = 200
    period_days: int = 7

    def encode(self) -> bytes:
        return codec.encode([
            self.capacity_C, self.regular_load_PR, self.community_ID_g.encode("utf-8"),
            self.utility_pk, codec.date_bytes(self.start_date), self.beta1, self.beta2,
            self.battery_capacity, self.period_days,
        ])

    @classmethod
    def decode(cls, data: bytes) -> "DeployPayload":
        c, pr, community, pk, start, b1, b2, battery, period = codec.as_list(codec.decode(data), 9)
        return cls(codec.as_int(c), codec.as_int(pr), codec.as_text(community), codec.as_bytes(pk),
                   codec.as_date(start), codec.as_int(b1), codec.as_int(b2),
                   codec.as_int(battery), codec.as_int(period))


def _signed(kind: TxKind, key: KeyPair, payload: bytes) -> Transaction:
    return Transaction(kind, key.address, payload, key.sign(payload))


def deploy_tx(utility: UtilityKeyPair, payload: DeployPayload) -> Transaction:
    return _signed(TxKind.CONTRACT_DEPLOY, utility, payload.encode())


def charging_request_tx(pseudonym: PseudonymKeyPair, token: Token, power_Pv: int, soc_Sv: int,
                        tcc_Kv: int, community: Optional[str] = None) -> Transaction:
    payload = RequestPayload(
        power_Pv, soc_Sv, tcc_Kv, token.common.date_TS,
        community if community is not None else token.common.community_ID_g,
        pseudonym.public_PK_i, token,
    ).encode()
    return Transaction(TxKind.CHARGING_REQUEST, pseudonym.address, payload, sign_request(pseudonym, payload))


def load_post_tx(utility: UtilityKeyPair, regular_load_PR: int) -> Transaction:
    return _signed(TxKind.UTILITY_LOAD_POST, utility, LoadPostPayload(regular_load_PR).encode())


def slot_trigger_tx(slot: int, date: datetime.date) -> Transaction:
    # system-scheduled, so unsigned
    return Transaction(TxKind.SLOT_TRIGGER, SYSTEM_SENDER, SlotTriggerPayload(slot, date).encode())
