import json
import os

import pytest

from credentials import KeyRole, PseudonymKeyPair, UtilityKeyPair, derive_address, load_key, save_key
from credentials.keys import (IdentityKeyPair, load_key_role, load_token, save_token, sign_request,
                              verify_request, verify_signature)
from errors import KeyFileError
from tests.conftest import COMMUNITY, START_DATE


def test_address_is_hash_suffix_of_public_key() -> None:
    key = PseudonymKeyPair.generate()
    assert len(key.address) == 20
    assert key.address == derive_address(key.public_bytes)
    assert PseudonymKeyPair.generate().address != key.address


def test_signatures_verify_and_bind_payload() -> None:
    key = PseudonymKeyPair.generate()
    signature = sign_request(key, b"payload")
    assert verify_request(key.public_PK_i, b"payload", signature)
    assert not verify_request(key.public_PK_i, b"payloaD", signature)
    assert not verify_signature(PseudonymKeyPair.generate().public_bytes, b"payload", signature)
    assert not verify_signature(b"\x02" + b"\x00" * 32, b"payload", signature)


def test_key_file_round_trip(tmp_path) -> None:
    key = UtilityKeyPair.generate()
    path = save_key(key, KeyRole.UTILITY, tmp_path / "utility.key")
    assert oct(os.stat(path).st_mode & 0o777) == oct(0o600)
    loaded = load_key(path, UtilityKeyPair)
    assert loaded == key
    assert isinstance(loaded, UtilityKeyPair)
    assert load_key_role(path) == KeyRole.UTILITY
    assert json.loads(path.read_text())["address"] == key.address.hex()


def test_save_key_refuses_overwrite(tmp_path) -> None:
    path = tmp_path / "esu.key"
    save_key(IdentityKeyPair.generate(), KeyRole.ESU, path)
    with pytest.raises(KeyFileError, match="already exists"):
        save_key(IdentityKeyPair.generate(), KeyRole.ESU, path)
    replacement = IdentityKeyPair.generate()
    save_key(replacement, KeyRole.ESU, path, force=True)
    assert load_key(path, IdentityKeyPair) == replacement


@pytest.mark.parametrize("content", [
    "not json",
    "{}",
    '{"role": "esu", "secret": "zz", "public": "00"}',
])
def test_corrupt_key_file(tmp_path, content) -> None:
    path = tmp_path / "bad.key"
    path.write_text(content)
    with pytest.raises(KeyFileError, match="Cannot parse"):
        load_key(path)


def test_key_file_with_mismatched_public_key(tmp_path) -> None:
    path = save_key(IdentityKeyPair.generate(), KeyRole.ESU, tmp_path / "esu.key")
    document = json.loads(path.read_text())
    document["public"] = IdentityKeyPair.generate().public_bytes.hex()
    path.write_text(json.dumps(document))
    with pytest.raises(KeyFileError, match="does not match"):
        load_key(path)


def test_missing_key_file(tmp_path) -> None:
    with pytest.raises(KeyFileError, match="not found"):
        load_key(tmp_path / "missing.key")


def test_token_file_round_trip(tmp_path, token_pool) -> None:
    _, token = token_pool[0]
    path = save_token(token, tmp_path / "token.json")
    document = json.loads(path.read_text())
    assert document["common"] == {"date": START_DATE.isoformat(), "community": COMMUNITY}
    assert load_token(path) == token


def test_corrupt_token_file(tmp_path) -> None:
    path = tmp_path / "token.json"
    path.write_text('{"signature": "00", "common": {"date": "2024-01-01", "community": "c"}}')
    with pytest.raises(KeyFileError):
        load_token(path)
