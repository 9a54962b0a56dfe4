"""
Abe-Okamoto partially blind signatures over secp256k1.

The signer sees the common message (date and community) in the clear and
signs a pseudonym public key it never sees. Three moves:

    signer  -> user    commitment (a, b)            open_commitment
    user    -> signer  blinded challenge e          blind
    signer  -> user    response (r, c, s, d)        respond
    user               token (rho, omega, sigma, delta)   unblind

A token verifies when omega + delta == H(rho*G + omega*Y, sigma*G + delta*Z, Z, m)
with Z derived from the common message.
"""
import datetime
from dataclasses import dataclass, field
from typing import Tuple

from credentials import group
from errors import BlindingError

_INFO_TAG = b"charging-coordination/common-message"


@dataclass(frozen=True)
class CommonMessage:
    date_TS: datetime.date
    community_ID_g: str

    def encode(self) -> bytes:
        ts = self.date_TS.isoformat().encode()
        community = self.community_ID_g.encode("utf-8")
        return (
            len(ts).to_bytes(2, "big") + ts
            + len(community).to_bytes(2, "big") + community
        )

    @classmethod
    def decode(cls, data: bytes) -> "CommonMessage":
        try:
            ts_len = int.from_bytes(data[0:2], "big")
            ts = data[2:2 + ts_len]
            offset = 2 + ts_len
            id_len = int.from_bytes(data[offset:offset + 2], "big")
            community = data[offset + 2:offset + 2 + id_len]
            if offset + 2 + id_len != len(data) or len(community) != id_len:
                raise ValueError("trailing or missing bytes")
            return cls(datetime.date.fromisoformat(ts.decode()), community.decode("utf-8"))
        except (ValueError, UnicodeDecodeError) as e:
            raise ValueError(f"invalid common message encoding: {e}")

    def info_point(self) -> group.Point:
        return group.hash_to_point(_INFO_TAG, self.encode())


@dataclass(frozen=True)
class Token:
    signature: Tuple[int, int, int, int]
    common: CommonMessage

    SIGNATURE_SIZE = 4 * group.SCALAR_SIZE

    def signature_bytes(self) -> bytes:
        return b"".join(group.scalar_to_bytes(v) for v in self.signature)

    def encode(self) -> bytes:
        return self.signature_bytes() + self.common.encode()

    @classmethod
    def decode(cls, data: bytes) -> "Token":
        if len(data) < cls.SIGNATURE_SIZE:
            raise ValueError("token too short")
        values = tuple(
            int.from_bytes(data[i:i + group.SCALAR_SIZE], "big")
            for i in range(0, cls.SIGNATURE_SIZE, group.SCALAR_SIZE)
        )
        return cls(values, CommonMessage.decode(data[cls.SIGNATURE_SIZE:]))


@dataclass(frozen=True)
class Commitment:
    a: group.Point
    b: group.Point

    def encode(self) -> bytes:
        return group.point_to_bytes(self.a) + group.point_to_bytes(self.b)


@dataclass
class SignerNonces:
    """Signer-side secrets for one issuance; used for exactly one response."""
    u: int
    s: int
    d: int
    common: CommonMessage
    used: bool = False


@dataclass(frozen=True)
class Response:
    r: int
    c: int
    s: int
    d: int

    def encode(self) -> bytes:
        return b"".join(group.scalar_to_bytes(v) for v in (self.r, self.c, self.s, self.d))


@dataclass
class BlindingState:
    t1: int
    t2: int
    t3: int
    t4: int
    message: bytes
    common: CommonMessage
    utility_pk: group.Point
    challenge: int
    consumed: bool = field(default=False)


def open_commitment(common: CommonMessage) -> Tuple[SignerNonces, Commitment]:
    nonces = SignerNonces(group.random_scalar(), group.random_scalar(), group.random_scalar(), common)
    z = common.info_point()
    a = group.base_mul(nonces.u)
    b = group.multi_mul((group.GENERATOR, nonces.s), (z, nonces.d))
    return nonces, Commitment(a, b)


def _challenge(alpha, beta, z, message: bytes) -> int:
    return group.hash_to_scalar(
        group.point_to_bytes(alpha), group.point_to_bytes(beta), group.point_to_bytes(z), message
    )


def blind(message: bytes, common: CommonMessage, commitment: Commitment,
          utility_pk: group.Point) -> Tuple[bytes, BlindingState]:
    """Blind `message` (a pseudonym public key) against the signer's commitment."""
    t1, t2, t3, t4 = (group.random_scalar() for _ in range(4))
    z = common.info_point()
    alpha = group.point_add(commitment.a, group.multi_mul((group.GENERATOR, t1), (utility_pk, t2)))
    beta = group.point_add(commitment.b, group.multi_mul((group.GENERATOR, t3), (z, t4)))
    if alpha is None or beta is None:
        raise BlindingError("degenerate blinding, retry with fresh randomness")
    epsilon = _challenge(alpha, beta, z, message)
    e = (epsilon - t2 - t4) % group.ORDER
    state = BlindingState(t1, t2, t3, t4, message, common, utility_pk, e)
    return group.scalar_to_bytes(e), state


def respond(nonces: SignerNonces, secret: int, blinded_message: bytes) -> Response:
    if nonces.used:
        raise BlindingError("signer nonces already used for a response")
    nonces.used = True
    e = group.scalar_from_bytes(blinded_message) % group.ORDER
    c = (e - nonces.d) % group.ORDER
    r = (nonces.u - c * secret) % group.ORDER
    return Response(r, c, nonces.s, nonces.d)


def unblind(response: Response, state: BlindingState) -> Token:
    if state.consumed:
        raise BlindingError("blinding state already consumed")
    state.consumed = True
    q = group.ORDER
    token = Token(
        (
            (response.r + state.t1) % q,
            (response.c + state.t2) % q,
            (response.s + state.t3) % q,
            (response.d + state.t4) % q,
        ),
        state.common,
    )
    # blinding factors are single-use
    state.t1 = state.t2 = state.t3 = state.t4 = 0
    if not verify_token(token, state.message, state.utility_pk, state.common):
        raise BlindingError("unblinded token does not verify; response and blinding state do not match")
    return token


def verify_token(token: Token, pseudonym_pk: bytes, utility_pk, expected_common: CommonMessage) -> bool:
    try:
        if token.common != expected_common:
            return False
        rho, omega, sigma, delta = token.signature
        if not all(0 <= v < group.ORDER for v in token.signature):
            return False
        if utility_pk is None or not group.is_on_curve(utility_pk):
            return False
        z = expected_common.info_point()
        lhs_one = group.multi_mul((group.GENERATOR, rho), (utility_pk, omega))
        lhs_two = group.multi_mul((group.GENERATOR, sigma), (z, delta))
        if lhs_one is None or lhs_two is None:
            return False
        return (omega + delta) % group.ORDER == _challenge(lhs_one, lhs_two, z, pseudonym_pk)
    except (ValueError, TypeError, AttributeError):
        return False


def token_fresh(token: Token, on_date: datetime.date, period_days: int) -> bool:
    # day difference, so dates near date.max cannot overflow
    return 0 <= (on_date - token.common.date_TS).days < period_days
