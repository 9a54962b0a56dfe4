from credentials.keys import (IdentityKeyPair, KeyRole, PseudonymKeyPair, UtilityKeyPair, derive_address,
                              load_key, load_token, save_key, save_token, sign_request, verify_request)
from credentials.pbs import BlindingState, CommonMessage, Token, blind, token_fresh, unblind, verify_token
from credentials.issuer import Issuer, acquire_tokens, request_token

__all__ = [
    "IdentityKeyPair", "KeyRole", "PseudonymKeyPair", "UtilityKeyPair", "derive_address",
    "load_key", "load_token", "save_key", "save_token", "sign_request", "verify_request",
    "BlindingState", "CommonMessage", "Token", "blind", "token_fresh", "unblind", "verify_token",
    "Issuer", "acquire_tokens", "request_token",
]
