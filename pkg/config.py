import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from errors import ConfigError

load_dotenv()


def _int_env(name: str, default: int, minimum: int = 0) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except (ValueError, TypeError):
        raise ConfigError(f"{name} must be an integer, got: {raw}")
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got: {value}")
    return value


class Config:
    """Load deployment settings from environment variables.

    Values may come from a `.env` file. Every variable is optional; see
    `.env.example` for the names and defaults.
    """

    def __init__(self):
        self.KEYSTORE_DIR: Path = Path(os.getenv("CHARGING_KEYSTORE_DIR") or "keystore")
        self.CHAIN_LOG: Path = Path(os.getenv("CHARGING_CHAIN_LOG") or "chain.log")
        self.COMMUNITY: str = os.getenv("CHARGING_COMMUNITY") or "community-1"

        self.TOKEN_QUOTA: int = _int_env("CHARGING_TOKEN_QUOTA", 10, minimum=1)
        self.PERIOD_DAYS: int = _int_env("CHARGING_PERIOD_DAYS", 7, minimum=1)
        self.BATTERY_CAPACITY: int = _int_env("CHARGING_BATTERY_CAPACITY", 200, minimum=1)
        self.SIM_WORKERS: int = _int_env("CHARGING_SIM_WORKERS", 0)

        if not self.COMMUNITY.strip():
            raise ConfigError("CHARGING_COMMUNITY must not be empty")

    @property
    def store_path(self) -> Path:
        return self.KEYSTORE_DIR / "issuer.db"


@dataclass
class CliConfig:
    keystore_dir: Path
    chain_log: Path
    community: str
    sim_config: Optional[Path] = None
    verbosity: int = 0

    @classmethod
    def from_env(cls, config: Config, chain_log: Optional[str] = None,
                 community: Optional[str] = None, sim_config: Optional[str] = None,
                 verbosity: int = 0) -> "CliConfig":
        cli = cls(
            keystore_dir=config.KEYSTORE_DIR,
            chain_log=Path(chain_log) if chain_log else config.CHAIN_LOG,
            community=community or config.COMMUNITY,
            sim_config=Path(sim_config) if sim_config else None,
            verbosity=verbosity,
        )
        if not cli.community.strip():
            raise ConfigError("community must not be empty")
        return cli
