"""
Key pairs, addresses and conventional (ECDSA) signatures.

Every key is a secp256k1 scalar. The same scalar drives the `ecdsa` group
arithmetic of the blind signature scheme and a `cryptography` ECDSA key for
ordinary signatures, so a utility, an ESU identity and a pseudonym all have
one key pair each.
"""
import datetime
import hashlib
import json
import os
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Union

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric import ec

from credentials import group
from credentials.pbs import CommonMessage, Token
from errors import KeyFileError, ValidationError
from utils.logger import setup_logger

logger = setup_logger()

ADDRESS_SIZE = 20
_ECDSA = ec.ECDSA(hashes.SHA256())


class KeyRole(Enum):
    UTILITY = 'utility'
    ESU = 'esu'


def derive_address(public_key: bytes) -> bytes:
    """Last 20 bytes of SHA-256 over the compressed public key."""
    return hashlib.sha256(public_key).digest()[-ADDRESS_SIZE:]


@dataclass(frozen=True)
class KeyPair:
    secret: int
    public_point: group.Point

    @classmethod
    def generate(cls):
        secret = group.random_scalar()
        return cls(secret, group.base_mul(secret))

    @classmethod
    def from_secret(cls, secret: int):
        if not 1 <= secret < group.ORDER:
            raise ValidationError("secret scalar out of range")
        return cls(secret, group.base_mul(secret))

    @property
    def public_bytes(self) -> bytes:
        return group.point_to_bytes(self.public_point)

    @property
    def address(self) -> bytes:
        return derive_address(self.public_bytes)

    def sign(self, payload: bytes) -> bytes:
        private_key = ec.derive_private_key(self.secret, ec.SECP256K1())
        return private_key.sign(payload, _ECDSA)


class UtilityKeyPair(KeyPair):
    """(P_tau, S_tau): the issuer of tokens and poster of load profiles."""

    @property
    def secret_S_tau(self) -> int:
        return self.secret

    @property
    def public_P_tau(self) -> group.Point:
        return self.public_point


class PseudonymKeyPair(KeyPair):
    """Single-use key whose address identifies one charging request."""

    @property
    def secret_x_i(self) -> int:
        return self.secret

    @property
    def public_PK_i(self) -> bytes:
        return self.public_bytes


class IdentityKeyPair(KeyPair):
    """Long-term key an ESU uses to authenticate itself to the utility."""


def verify_signature(public_key: bytes, payload: bytes, signature: bytes) -> bool:
    try:
        key = ec.EllipticCurvePublicKey.from_encoded_point(ec.SECP256K1(), public_key)
        key.verify(signature, payload, _ECDSA)
        return True
    except (InvalidSignature, ValueError, TypeError):
        return False


def sign_request(pseudonym: PseudonymKeyPair, payload: bytes) -> bytes:
    return pseudonym.sign(payload)


def verify_request(public_key: bytes, payload: bytes, signature: bytes) -> bool:
    return verify_signature(public_key, payload, signature)


# --- key files ---

def save_key(key: KeyPair, role: KeyRole, path: Union[str, Path], force: bool = False) -> Path:
    path = Path(path)
    if path.exists() and not force:
        raise KeyFileError(f"{path} already exists (use --force to overwrite)")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        document = {
            "role": role.value,
            "secret": group.scalar_to_bytes(key.secret).hex(),
            "public": key.public_bytes.hex(),
            "address": key.address.hex(),
        }
        path.write_text(json.dumps(document, indent=2) + "\n")
        os.chmod(path, 0o600)
    except OSError as e:
        raise KeyFileError(f"Cannot write key file {path}: {e}")
    logger.info(f"Wrote {role.value} key {key.address.hex()} to {path}")
    return path


def load_key(path: Union[str, Path], cls=KeyPair) -> KeyPair:
    path = Path(path)
    try:
        document = json.loads(path.read_text())
        secret = group.scalar_from_bytes(bytes.fromhex(document["secret"]))
        public = bytes.fromhex(document["public"])
        key = cls.from_secret(secret)
    except FileNotFoundError:
        raise KeyFileError(f"Key file not found: {path}")
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise KeyFileError(f"Cannot parse key file {path}: {e}")
    if key.public_bytes != public:
        raise KeyFileError(f"Key file {path}: public key does not match the secret")
    return key


def load_key_role(path: Union[str, Path]) -> KeyRole:
    try:
        return KeyRole(json.loads(Path(path).read_text())["role"])
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise KeyFileError(f"Cannot parse key file {path}: {e}")


# --- token files ---

def save_token(token: Token, path: Union[str, Path], force: bool = False) -> Path:
    path = Path(path)
    if path.exists() and not force:
        raise KeyFileError(f"{path} already exists (use --force to overwrite)")
    document = {
        "signature": token.signature_bytes().hex(),
        "common": {
            "date": token.common.date_TS.isoformat(),
            "community": token.common.community_ID_g,
        },
    }
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(document, indent=2) + "\n")
    except OSError as e:
        raise KeyFileError(f"Cannot write token file {path}: {e}")
    return path


def load_token(path: Union[str, Path]) -> Token:
    path = Path(path)
    try:
        document = json.loads(path.read_text())
        raw = bytes.fromhex(document["signature"])
        common = CommonMessage(
            datetime.date.fromisoformat(document["common"]["date"]),
            document["common"]["community"],
        )
        if len(raw) != Token.SIGNATURE_SIZE:
            raise ValueError(f"signature must be {Token.SIGNATURE_SIZE} bytes, got {len(raw)}")
        return Token.decode(raw + common.encode())
    except FileNotFoundError:
        raise KeyFileError(f"Token file not found: {path}")
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise KeyFileError(f"Cannot parse token file {path}: {e}")
