import datetime
import threading

import pytest

from credentials import CommonMessage, IdentityKeyPair, acquire_tokens, request_token, verify_token
from credentials.issuer import IssuedResponse, period_start, unblind_verified
from credentials.keys import PseudonymKeyPair
from credentials.pbs import blind
from errors import BlindingError, IdentityError, QuotaExceededError, VerificationError
from utils.store import IssuerStore
from tests.conftest import START_DATE


def _enrolled(issuer) -> IdentityKeyPair:
    identity = IdentityKeyPair.generate()
    issuer.register_identity(identity.public_bytes)
    return identity


def test_acquire_tokens_all_verify(issuer, utility, common) -> None:
    identity = _enrolled(issuer)
    tokens = acquire_tokens(issuer, identity, common, 10)
    assert len(tokens) == 10
    assert len({p.address for p, _ in tokens}) == 10
    for pseudonym, token in tokens:
        assert verify_token(token, pseudonym.public_PK_i, utility.public_P_tau, common)


def test_quota_is_enforced_per_period(issuer, common) -> None:
    identity = _enrolled(issuer)
    acquire_tokens(issuer, identity, common, issuer.quota)
    with pytest.raises(QuotaExceededError, match="quota of 10"):
        request_token(issuer, identity, common)
    next_period = CommonMessage(START_DATE + datetime.timedelta(days=7), common.community_ID_g)
    request_token(issuer, identity, next_period)


def test_period_start() -> None:
    assert period_start(datetime.date(1970, 1, 9), 7) == datetime.date(1970, 1, 8)
    day = datetime.date(2024, 3, 14)
    assert period_start(day, 1) == day
    start = period_start(day, 7)
    assert start <= day < start + datetime.timedelta(days=7)


def test_unregistered_identity_is_rejected(issuer, common) -> None:
    with pytest.raises(IdentityError, match="not registered"):
        request_token(issuer, IdentityKeyPair.generate(), common)


def test_forged_identity_signature_is_rejected(issuer, common) -> None:
    identity = _enrolled(issuer)
    session_id, commitment = issuer.open_session(common)
    blinded, _ = blind(PseudonymKeyPair.generate().public_PK_i, common, commitment, issuer.public_key)
    forged = IdentityKeyPair.generate().sign(session_id.to_bytes(8, "big") + blinded + common.encode())
    with pytest.raises(IdentityError, match="Invalid identity signature"):
        issuer.issue(session_id, blinded, common, identity.address, forged)


def test_session_is_single_use(issuer, common) -> None:
    identity = _enrolled(issuer)
    session_id, commitment = issuer.open_session(common)
    blinded, _ = blind(PseudonymKeyPair.generate().public_PK_i, common, commitment, issuer.public_key)
    signature = identity.sign(session_id.to_bytes(8, "big") + blinded + common.encode())
    issuer.issue(session_id, blinded, common, identity.address, signature)
    with pytest.raises(BlindingError, match="already used"):
        issuer.issue(session_id, blinded, common, identity.address, signature)


def test_common_message_must_match_commitment(issuer, common) -> None:
    identity = _enrolled(issuer)
    session_id, commitment = issuer.open_session(common)
    other = CommonMessage(common.date_TS, "community-2")
    blinded, _ = blind(PseudonymKeyPair.generate().public_PK_i, other, commitment, issuer.public_key)
    signature = identity.sign(session_id.to_bytes(8, "big") + blinded + other.encode())
    with pytest.raises(BlindingError, match="differs"):
        issuer.issue(session_id, blinded, other, identity.address, signature)


def test_utility_response_signature_is_checked(issuer, common) -> None:
    identity = _enrolled(issuer)
    session_id, commitment = issuer.open_session(common)
    blinded, state = blind(PseudonymKeyPair.generate().public_PK_i, common, commitment, issuer.public_key)
    signature = identity.sign(session_id.to_bytes(8, "big") + blinded + common.encode())
    issued = issuer.issue(session_id, blinded, common, identity.address, signature)
    tampered = IssuedResponse(issued.session_id, issued.response, identity.sign(b"not the utility"))
    with pytest.raises(VerificationError):
        unblind_verified(tampered, blinded, state)


def test_transcript_holds_no_pseudonym(utility, common) -> None:
    from credentials import Issuer

    issuer = Issuer(utility, record_transcript=True)
    identity = _enrolled(issuer)
    pseudonym, _ = request_token(issuer, identity, common)
    assert len(issuer.transcript) == 1
    for blinded, response in issuer.transcript:
        assert pseudonym.public_PK_i not in blinded + response


def test_transcript_is_off_by_default(issuer, common) -> None:
    request_token(issuer, _enrolled(issuer), common)
    assert issuer.transcript is None


def test_oldest_unredeemed_session_is_evicted(utility, common) -> None:
    from credentials import Issuer

    issuer = Issuer(utility, max_open_sessions=2)
    identity = _enrolled(issuer)
    sessions = [issuer.open_session(common) for _ in range(3)]
    assert len(issuer._sessions) == 2

    (oldest, commitment), (newest, newest_commitment) = sessions[0], sessions[-1]
    blinded, _ = blind(PseudonymKeyPair.generate().public_PK_i, common, commitment, issuer.public_key)
    signature = identity.sign(oldest.to_bytes(8, "big") + blinded + common.encode())
    with pytest.raises(BlindingError, match="Unknown or already used"):
        issuer.issue(oldest, blinded, common, identity.address, signature)

    blinded, state = blind(PseudonymKeyPair.generate().public_PK_i, common, newest_commitment, issuer.public_key)
    signature = identity.sign(newest.to_bytes(8, "big") + blinded + common.encode())
    issued = issuer.issue(newest, blinded, common, identity.address, signature)
    assert verify_token(unblind_verified(issued, blinded, state), state.message, issuer.public_key, common)


def test_concurrent_requests_respect_quota(utility, common, tmp_path) -> None:
    from credentials import Issuer

    issuer = Issuer(utility, IssuerStore(tmp_path / "issuer.db"), quota=4)
    identity = _enrolled(issuer)
    outcomes = []

    def worker():
        try:
            request_token(issuer, identity, common)
            outcomes.append("ok")
        except QuotaExceededError:
            outcomes.append("quota")

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert outcomes.count("ok") == 4
    assert outcomes.count("quota") == 4
