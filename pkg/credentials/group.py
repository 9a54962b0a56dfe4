"""
Prime-order group used by the credential protocol: secp256k1 from `ecdsa`.

Points are `ecdsa` PointJacobi objects; None stands for the point at infinity
so callers never see the package's INFINITY sentinel. Scalars are integers
mod ORDER.
"""
import hashlib
from typing import Optional, Tuple

from ecdsa import SECP256k1
from ecdsa.ellipticcurve import INFINITY, PointJacobi
from ecdsa.errors import MalformedPointError
from ecdsa.numbertheory import Error as NumberTheoryError
from ecdsa.util import randrange

CURVE = SECP256k1.curve
FIELD_P = CURVE.p()
ORDER = SECP256k1.order
GENERATOR: PointJacobi = SECP256k1.generator

SCALAR_SIZE = 32
POINT_SIZE = 33

Point = Optional[PointJacobi]


def _finite(P) -> Point:
    if P is None or P == INFINITY:
        return None
    return P


def is_on_curve(P: Point) -> bool:
    if P is None:
        return True
    x, y = P.x(), P.y()
    return 0 <= x < FIELD_P and 0 <= y < FIELD_P and CURVE.contains_point(x, y)


def point_add(P1: Point, P2: Point) -> Point:
    if P1 is None:
        return P2
    if P2 is None:
        return P1
    return _finite(P1 + P2)


def point_mul(P: Point, k: int) -> Point:
    k %= ORDER
    if P is None or k == 0:
        return None
    return _finite(P * k)


def multi_mul(*pairs: Tuple[Point, int]) -> Point:
    """Sum of k_i * P_i; two-term sums go through PointJacobi.mul_add."""
    terms = [(P, k % ORDER) for P, k in pairs if P is not None and k % ORDER]
    if not terms:
        return None
    if len(terms) == 2:
        (P1, k1), (P2, k2) = terms
        return _finite(P1.mul_add(k1, P2, k2))
    acc: Point = None
    for P, k in terms:
        acc = point_add(acc, _finite(P * k))
    return acc


def base_mul(k: int) -> Point:
    return point_mul(GENERATOR, k)


def random_scalar() -> int:
    return randrange(ORDER)


def scalar_to_bytes(k: int) -> bytes:
    return k.to_bytes(SCALAR_SIZE, "big")


def scalar_from_bytes(data: bytes) -> int:
    if len(data) != SCALAR_SIZE:
        raise ValueError(f"scalar must be {SCALAR_SIZE} bytes, got: {len(data)}")
    return int.from_bytes(data, "big")


def point_to_bytes(P: Point) -> bytes:
    """SEC1 compressed encoding."""
    if P is None:
        raise ValueError("cannot encode the point at infinity")
    return P.to_bytes("compressed")


def _decode_compressed(data: bytes) -> Point:
    if int.from_bytes(data[1:], "big") >= FIELD_P:
        return None
    try:
        return PointJacobi.from_bytes(CURVE, data, valid_encodings=("compressed",), order=ORDER)
    except (MalformedPointError, NumberTheoryError):
        return None


def point_from_bytes(data: bytes) -> PointJacobi:
    if len(data) != POINT_SIZE or data[0] not in (2, 3):
        raise ValueError("invalid compressed point encoding")
    P = _decode_compressed(data)
    if P is None:
        raise ValueError("encoded point is not on the curve")
    return P


def hash_to_scalar(*parts: bytes) -> int:
    h = hashlib.sha256()
    for part in parts:
        h.update(len(part).to_bytes(4, "big"))
        h.update(part)
    return int.from_bytes(h.digest(), "big") % ORDER


def hash_to_point(tag: bytes, data: bytes) -> PointJacobi:
    """Try-and-increment map to a point nobody knows the discrete log of."""
    counter = 0
    while True:
        digest = hashlib.sha256(tag + data + counter.to_bytes(4, "big")).digest()
        P = _decode_compressed(b"\x02" + digest)
        if P is not None:
            return P
        counter += 1
