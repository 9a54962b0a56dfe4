"""
Canonical encoding helpers on top of RLP.

RLP gives a unique byte string for a nested list of byte strings and
non-negative integers, which is what state roots and block hashes need.
"""
import datetime
import hashlib
from typing import Any, List

import rlp
from rlp.exceptions import DecodingError, DeserializationError
from rlp.sedes import big_endian_int


def encode(obj: Any) -> bytes:
    return rlp.encode(obj)


def decode(data: bytes) -> Any:
    try:
        return rlp.decode(data)
    except DecodingError as e:
        raise ValueError(f"invalid RLP: {e}")


def digest(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


def as_int(item: Any) -> int:
    if not isinstance(item, bytes):
        raise ValueError("expected an integer item")
    try:
        return big_endian_int.deserialize(item)
    except DeserializationError as e:
        raise ValueError(f"invalid integer: {e}")


def as_bytes(item: Any) -> bytes:
    if not isinstance(item, bytes):
        raise ValueError("expected a byte string item")
    return item


def as_list(item: Any, length: int = -1) -> List[Any]:
    if not isinstance(item, list):
        raise ValueError("expected a list item")
    if length >= 0 and len(item) != length:
        raise ValueError(f"expected {length} items, got {len(item)}")
    return item


def as_text(item: Any) -> str:
    try:
        return as_bytes(item).decode("utf-8")
    except UnicodeDecodeError as e:
        raise ValueError(f"invalid text: {e}")


def date_bytes(value: datetime.date) -> bytes:
    return value.isoformat().encode()


def as_date(item: Any) -> datetime.date:
    text = as_text(item)
    parsed = datetime.date.fromisoformat(text)
    if parsed.isoformat() != text:
        raise ValueError(f"non-canonical date: {text}")
    return parsed
