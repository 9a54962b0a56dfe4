import datetime
import random

import pytest

from credentials import group, pbs
from credentials.keys import PseudonymKeyPair
from credentials.pbs import CommonMessage, Token, blind, open_commitment, respond, token_fresh, unblind, verify_token
from errors import BlindingError
from tests.conftest import COMMUNITY, START_DATE


def _issue(utility, common):
    pseudonym = PseudonymKeyPair.generate()
    nonces, commitment = open_commitment(common)
    blinded, state = blind(pseudonym.public_PK_i, common, commitment, utility.public_P_tau)
    response = respond(nonces, utility.secret_S_tau, blinded)
    return pseudonym, unblind(response, state)


def test_issued_tokens_verify(utility, common) -> None:
    for _ in range(100):
        pseudonym, token = _issue(utility, common)
        assert verify_token(token, pseudonym.public_PK_i, utility.public_P_tau, common)


def test_token_bound_to_common_message(utility, common) -> None:
    pseudonym, token = _issue(utility, common)
    other_day = CommonMessage(START_DATE + datetime.timedelta(days=1), COMMUNITY)
    other_community = CommonMessage(START_DATE, "community-2")
    assert not verify_token(token, pseudonym.public_PK_i, utility.public_P_tau, other_day)
    assert not verify_token(token, pseudonym.public_PK_i, utility.public_P_tau, other_community)


def test_token_bound_to_pseudonym_and_signer(utility, common) -> None:
    pseudonym, token = _issue(utility, common)
    other = PseudonymKeyPair.generate()
    assert not verify_token(token, other.public_PK_i, utility.public_P_tau, common)
    assert not verify_token(token, pseudonym.public_PK_i, group.base_mul(group.random_scalar()), common)


def _flip(data: bytes, bit: int) -> bytes:
    raw = bytearray(data)
    raw[bit // 8] ^= 1 << (bit % 8)
    return bytes(raw)


def test_single_bit_tampering_fails(utility, common) -> None:
    rng = random.Random(17)
    pseudonym, token = _issue(utility, common)
    pk = pseudonym.public_PK_i
    for i in range(100):
        target = i % 3
        if target == 0:
            sig = _flip(token.signature_bytes(), rng.randrange(Token.SIGNATURE_SIZE * 8))
            tampered = Token.decode(sig + common.encode())
            assert not verify_token(tampered, pk, utility.public_P_tau, common)
        elif target == 1:
            assert not verify_token(token, _flip(pk, rng.randrange(len(pk) * 8)), utility.public_P_tau, common)
        else:
            encoded = common.encode()
            # flip inside the date or community text
            bit = rng.randrange(2 * 8, len(encoded) * 8)
            try:
                tampered_common = CommonMessage.decode(_flip(encoded, bit))
            except ValueError:
                continue
            tampered = Token(token.signature, tampered_common)
            assert not verify_token(tampered, pk, utility.public_P_tau, tampered_common)


@pytest.mark.slow
def test_fabricated_tokens_never_verify(utility, common) -> None:
    rng = random.Random(23)
    pk = PseudonymKeyPair.generate().public_PK_i
    for _ in range(1000):
        signature = tuple(rng.randrange(group.ORDER) for _ in range(4))
        assert not verify_token(Token(signature, common), pk, utility.public_P_tau, common)


def test_signer_transcript_shares_no_token_scalars(utility, common) -> None:
    pseudonym = PseudonymKeyPair.generate()
    nonces, commitment = open_commitment(common)
    blinded, state = blind(pseudonym.public_PK_i, common, commitment, utility.public_P_tau)
    response = respond(nonces, utility.secret_S_tau, blinded)
    token = unblind(response, state)
    signer_view = blinded + commitment.encode() + response.encode()
    for value in token.signature:
        assert group.scalar_to_bytes(value) not in signer_view


def test_response_and_state_are_single_use(utility, common) -> None:
    pseudonym = PseudonymKeyPair.generate()
    nonces, commitment = open_commitment(common)
    blinded, state = blind(pseudonym.public_PK_i, common, commitment, utility.public_P_tau)
    response = respond(nonces, utility.secret_S_tau, blinded)
    with pytest.raises(BlindingError):
        respond(nonces, utility.secret_S_tau, blinded)
    unblind(response, state)
    assert (state.t1, state.t2, state.t3, state.t4) == (0, 0, 0, 0)
    with pytest.raises(BlindingError):
        unblind(response, state)


def test_unblind_rejects_mismatched_response(utility, common) -> None:
    pseudonym = PseudonymKeyPair.generate()
    nonces, commitment = open_commitment(common)
    blinded, state = blind(pseudonym.public_PK_i, common, commitment, utility.public_P_tau)
    response = respond(nonces, utility.secret_S_tau, blinded)
    forged = pbs.Response(response.r, response.c, (response.s + 1) % group.ORDER, response.d)
    with pytest.raises(BlindingError):
        unblind(forged, state)


def test_common_message_encoding(common) -> None:
    assert CommonMessage.decode(common.encode()) == common
    with pytest.raises(ValueError):
        CommonMessage.decode(common.encode() + b"x")


def test_token_freshness(utility, common) -> None:
    _, token = _issue(utility, common)
    assert token_fresh(token, START_DATE, 7)
    assert token_fresh(token, START_DATE + datetime.timedelta(days=6), 7)
    assert not token_fresh(token, START_DATE + datetime.timedelta(days=7), 7)
    assert not token_fresh(token, START_DATE - datetime.timedelta(days=1), 7)


@pytest.mark.parametrize("period_days", [1, 7, 10 ** 9])
def test_token_freshness_at_calendar_end(period_days) -> None:
    token = Token((1, 2, 3, 4), CommonMessage(datetime.date.max, "community-1"))
    assert token_fresh(token, datetime.date.max, period_days)
    assert not token_fresh(token, datetime.date.max - datetime.timedelta(days=1), period_days)


def test_blinding_is_randomized(utility, common) -> None:
    pk = PseudonymKeyPair.generate().public_PK_i
    first = blind(pk, common, open_commitment(common)[1], utility.public_P_tau)[0]
    second = blind(pk, common, open_commitment(common)[1], utility.public_P_tau)[0]
    assert first != second
    assert pk not in (first, second)


def test_state_from_another_blind_call_fails(utility, common) -> None:
    nonces, commitment = open_commitment(common)
    blinded, _ = blind(PseudonymKeyPair.generate().public_PK_i, common, commitment, utility.public_P_tau)
    _, other_state = blind(PseudonymKeyPair.generate().public_PK_i, common, commitment, utility.public_P_tau)
    response = respond(nonces, utility.secret_S_tau, blinded)
    with pytest.raises(BlindingError):
        unblind(response, other_state)


@pytest.mark.slow
def test_blinded_messages_never_repeat(utility, common) -> None:
    seen = set()
    for _ in range(1000):
        pk = PseudonymKeyPair.generate().public_PK_i
        blinded, _ = blind(pk, common, open_commitment(common)[1], utility.public_P_tau)
        assert blinded != pk
        seen.add(blinded)
    assert len(seen) == 1000
