"""
Key generation and token issuance.

Issuance runs both sides of the blind signature exchange in one process: the
utility side keeps its enrolled identities and per-period counts in the
sqlite store under the key-store directory.
"""
import datetime
from pathlib import Path
from typing import List, Optional, Tuple, Union

from credentials import (IdentityKeyPair, Issuer, KeyRole, PseudonymKeyPair, UtilityKeyPair,
                         acquire_tokens, load_key, save_key, save_token, verify_token)
from credentials.issuer import period_start
from credentials.keys import load_key_role
from credentials.pbs import CommonMessage
from errors import KeyFileError, QuotaExceededError, ValidationError
from utils.logger import setup_logger
from utils.store import IssuerStore

logger = setup_logger()


def cmd_keygen(role: Union[str, KeyRole], out_path: Union[str, Path], force: bool = False) -> bytes:
    role = KeyRole(role)
    key_cls = UtilityKeyPair if role == KeyRole.UTILITY else IdentityKeyPair
    key = key_cls.generate()
    save_key(key, role, out_path, force=force)
    print(f"{role.value} key written to {out_path}")
    print(f"address: {key.address.hex()}")
    if role == KeyRole.UTILITY:
        print(f"public key: {key.public_bytes.hex()}")
    return key.address


def load_role(path: Union[str, Path], role: KeyRole, cls):
    found = load_key_role(path)
    if found != role:
        raise KeyFileError(f"{path} holds a {found.value} key, expected {role.value}")
    return load_key(path, cls)


def cmd_issue(utility_key: Union[str, Path], identity_key: Union[str, Path], n_tokens: int,
              date: datetime.date, community: str, out_dir: Union[str, Path],
              store_path: Optional[Union[str, Path]] = None, quota: int = 10,
              period_days: int = 7, force: bool = False) -> List[Tuple[Path, Path]]:
    """Acquire `n_tokens` tokens for one ESU identity and write them next to their pseudonym keys.

    Returns (token file, pseudonym key file) pairs.
    """
    if n_tokens < 1:
        raise ValidationError(f"number of tokens must be >= 1, got: {n_tokens}")
    if not community.strip():
        raise ValidationError("community must not be empty")

    utility = load_role(utility_key, KeyRole.UTILITY, UtilityKeyPair)
    identity = load_role(identity_key, KeyRole.ESU, IdentityKeyPair)

    store = IssuerStore(store_path or ":memory:")
    try:
        issuer = Issuer(utility, store, quota=quota, period_days=period_days)
        address = issuer.register_identity(identity.public_bytes)

        # refuse up front so a partial batch is never issued
        period = period_start(date, period_days).isoformat()
        already = store.get_issued_count(address.hex(), period)
        if already + n_tokens > quota:
            raise QuotaExceededError(address.hex(), quota)

        common = CommonMessage(date, community)
        tokens = acquire_tokens(issuer, identity, common, n_tokens)
    finally:
        store.close()

    out_dir = Path(out_dir)
    written = []
    for pseudonym, token in tokens:
        if not verify_token(token, pseudonym.public_PK_i, utility.public_P_tau, common):
            raise ValidationError(f"issued token for {pseudonym.address.hex()} does not verify")
        stem = pseudonym.address.hex()[:16]
        token_path = save_token(token, out_dir / f"token_{stem}.json", force=force)
        key_path = save_key(pseudonym, KeyRole.ESU, out_dir / f"pseudonym_{stem}.key", force=force)
        written.append((token_path, key_path))
        print(f"{pseudonym.address.hex()}  {token_path}  {key_path}")

    logger.info(f"Issued {len(written)} tokens to {address.hex()} for {common.date_TS} / {community}")
    print(f"{len(written)} tokens for {date.isoformat()} / {community} ({already + len(written)}/{quota} this period)")
    return written


def load_pseudonym(path: Union[str, Path]) -> PseudonymKeyPair:
    return load_key(path, PseudonymKeyPair)
