"""
The utility's side of token acquisition, and the ESU loop that drives it.
"""
import datetime
import threading
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from credentials import group, pbs
from credentials.keys import IdentityKeyPair, PseudonymKeyPair, UtilityKeyPair, derive_address, verify_signature
from credentials.pbs import BlindingState, CommonMessage, Commitment, Response, Token
from errors import BlindingError, IdentityError, QuotaExceededError, VerificationError
from utils.logger import setup_logger
from utils.store import IssuerStore

logger = setup_logger()


@dataclass(frozen=True)
class IssuedResponse:
    """Blinded signature plus the utility's signature sigma_U over the exchange."""
    session_id: int
    response: Response
    utility_signature: bytes

    def signed_bytes(self, blinded_message: bytes) -> bytes:
        return response_transcript(self.session_id, blinded_message, self.response)


def response_transcript(session_id: int, blinded_message: bytes, response: Response) -> bytes:
    return session_id.to_bytes(8, "big") + blinded_message + response.encode()


def period_start(on_date: datetime.date, period_days: int) -> datetime.date:
    """First day of the issuance period containing `on_date` (periods count from 1970-01-01)."""
    offset = (on_date - datetime.date(1970, 1, 1)).days % period_days
    return on_date - datetime.timedelta(days=offset)


class Issuer:
    """Utility issuing partially blind tokens to enrolled ESUs under a quota."""

    def __init__(self, keypair: UtilityKeyPair, store: Optional[IssuerStore] = None,
                 quota: int = 10, period_days: int = 7, max_open_sessions: int = 1024,
                 record_transcript: bool = False):
        self.keypair = keypair
        self.store = store or IssuerStore()
        self.quota = quota
        self.period_days = period_days
        self._sessions: Dict[int, pbs.SignerNonces] = {}
        self._next_session = 0
        self._sessions_lock = threading.Lock()
        self._identity_locks: Dict[str, threading.Lock] = defaultdict(threading.Lock)
        self.max_open_sessions = max_open_sessions
        # (blinded message, response) pairs, kept only when asked for
        self.transcript: Optional[List[Tuple[bytes, bytes]]] = [] if record_transcript else None

    @property
    def public_key(self):
        return self.keypair.public_P_tau

    def register_identity(self, identity_public_key: bytes) -> bytes:
        group.point_from_bytes(identity_public_key)
        address = derive_address(identity_public_key)
        self.store.register_identity(address.hex(), identity_public_key.hex())
        logger.info(f"Registered identity {address.hex()}")
        return address

    def open_session(self, common: CommonMessage) -> Tuple[int, Commitment]:
        nonces, commitment = pbs.open_commitment(common)
        with self._sessions_lock:
            session_id = self._next_session
            self._next_session += 1
            self._sessions[session_id] = nonces
            while len(self._sessions) > self.max_open_sessions:
                stale = next(iter(self._sessions))
                del self._sessions[stale]
                logger.debug(f"Evicted unredeemed issuance session {stale}")
        return session_id, commitment

    def issue(self, session_id: int, blinded_message: bytes, common: CommonMessage,
              identity_address: bytes, identity_signature: bytes) -> IssuedResponse:
        identity = identity_address.hex()
        public_hex = self.store.get_identity(identity)
        if public_hex is None:
            raise IdentityError(f"Identity {identity} is not registered")
        signed = session_id.to_bytes(8, "big") + blinded_message + common.encode()
        if not verify_signature(bytes.fromhex(public_hex), signed, identity_signature):
            raise IdentityError(f"Invalid identity signature from {identity}")

        with self._sessions_lock:
            nonces = self._sessions.pop(session_id, None)
        if nonces is None:
            raise BlindingError(f"Unknown or already used issuance session {session_id}")
        if nonces.common != common:
            raise BlindingError("Common message differs from the one committed to")

        period = period_start(common.date_TS, self.period_days).isoformat()
        with self._identity_locks[identity]:
            count = self.store.increment_issued(identity, period, self.quota)
        if count is None:
            logger.warning(f"Quota exhausted for {identity} ({self.quota} per period)")
            raise QuotaExceededError(identity, self.quota)

        response = pbs.respond(nonces, self.keypair.secret_S_tau, blinded_message)
        if self.transcript is not None:
            self.transcript.append((blinded_message, response.encode()))
        signature = self.keypair.sign(response_transcript(session_id, blinded_message, response))
        logger.info(f"Issued token to {identity} ({count}/{self.quota} this period)")
        return IssuedResponse(session_id, response, signature)


def request_token(issuer: Issuer, identity: IdentityKeyPair,
                  common: CommonMessage) -> Tuple[PseudonymKeyPair, Token]:
    """Run one full blind -> issue -> unblind exchange for a fresh pseudonym."""
    pseudonym = PseudonymKeyPair.generate()
    session_id, commitment = issuer.open_session(common)
    blinded, state = pbs.blind(pseudonym.public_PK_i, common, commitment, issuer.public_key)
    identity_sig = identity.sign(session_id.to_bytes(8, "big") + blinded + common.encode())
    issued = issuer.issue(session_id, blinded, common, identity.address, identity_sig)
    return pseudonym, unblind_verified(issued, blinded, state)


def unblind_verified(issued: IssuedResponse, blinded_message: bytes, state: BlindingState) -> Token:
    utility_pk = group.point_to_bytes(state.utility_pk)
    if not verify_signature(utility_pk, issued.signed_bytes(blinded_message), issued.utility_signature):
        raise VerificationError("Utility signature on the issuance response does not verify")
    return pbs.unblind(issued.response, state)


def acquire_tokens(issuer: Issuer, identity: IdentityKeyPair, common: CommonMessage,
                   n: int) -> List[Tuple[PseudonymKeyPair, Token]]:
    return [request_token(issuer, identity, common) for _ in range(n)]
