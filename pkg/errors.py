"""
Exception hierarchy shared by the library and the CLI.

ValidationError maps to exit status 1, VerificationError to exit status 2.
"""


class ChargingError(Exception):
    pass


class ValidationError(ChargingError, ValueError):
    """Input outside its allowed range, quota exhausted, bad files."""


class VerificationError(ChargingError, RuntimeError):
    """A signature, hash link or state root did not check out."""


class ConfigError(ValidationError):
    pass


class KeyFileError(ValidationError):
    pass


class QuotaExceededError(ValidationError):
    def __init__(self, identity: str, quota: int):
        super().__init__(f"Token quota of {quota} per period exhausted for identity {identity}")
        self.identity = identity
        self.quota = quota


class IdentityError(ValidationError):
    pass


class BlindingError(ValidationError):
    pass


class ChainVerificationError(VerificationError):
    def __init__(self, height: int, reason: str):
        super().__init__(f"Block {height} failed verification: {reason}")
        self.height = height
        self.reason = reason
