"""
Simulation configuration and stochastic ESU arrivals.
"""
import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from errors import ConfigError
from scheduler import EsuDemand, SchedulerParams

DEFAULT_LAMBDAS = (2.0, 4.0, 6.0, 8.0, 10.0)


@dataclass(frozen=True)
class SimConfig:
    num_slots: int = 30
    battery_capacity: int = 200
    headroom: int = 1000
    initial_esus: int = 10
    arrival_rate_lambda: float = 4.0
    tcc_mean: float = 4.0
    runs: int = 80
    rng_seed: int = 20190601
    beta1: int = 500
    beta2: int = 500
    lambdas: Tuple[float, ...] = field(default=DEFAULT_LAMBDAS)
    bootstrap_samples: int = 2000

    def validate(self) -> "SimConfig":
        positive = ("num_slots", "battery_capacity", "initial_esus", "runs", "bootstrap_samples")
        for name in positive:
            if getattr(self, name) < 1:
                raise ConfigError(f"invalid config field '{name}': must be >= 1, got {getattr(self, name)}")
        if self.headroom < 0:
            raise ConfigError(f"invalid config field 'headroom': must be >= 0, got {self.headroom}")
        if self.arrival_rate_lambda < 0:
            raise ConfigError(f"invalid config field 'arrival_rate_lambda': must be >= 0, got {self.arrival_rate_lambda}")
        if self.tcc_mean < 1:
            raise ConfigError(f"invalid config field 'tcc_mean': must be >= 1, got {self.tcc_mean}")
        if not 0 <= self.rng_seed < 2 ** 64:
            raise ConfigError(f"invalid config field 'rng_seed': must fit in 64 bits, got {self.rng_seed}")
        try:
            SchedulerParams(self.beta1, self.beta2, self.headroom, 0).validate()
        except ValueError as e:
            raise ConfigError(f"invalid config field 'beta1'/'beta2': {e}")
        if not self.lambdas:
            raise ConfigError("invalid config field 'lambdas': must not be empty")
        if any(lam < 0 for lam in self.lambdas):
            raise ConfigError("invalid config field 'lambdas': rates must be >= 0")
        if len(set(self.lambdas)) != len(self.lambdas):
            raise ConfigError(f"invalid config field 'lambdas': duplicate rates in {list(self.lambdas)}")
        return self

    @classmethod
    def from_dict(cls, document: dict) -> "SimConfig":
        known = {f.name: f for f in fields(cls)}
        unknown = sorted(set(document) - set(known))
        if unknown:
            raise ConfigError(f"invalid config field '{unknown[0]}': unknown field")
        values = {}
        for name, value in document.items():
            if name == "lambdas":
                if not isinstance(value, list):
                    raise ConfigError("invalid config field 'lambdas': must be a list")
                value = tuple(float(v) for v in value)
            elif isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"invalid config field '{name}': must be a number, got {value!r}")
            elif known[name].type in (int, "int"):
                if float(value) != int(value):
                    raise ConfigError(f"invalid config field '{name}': must be an integer, got {value}")
                value = int(value)
            else:
                value = float(value)
            values[name] = value
        return cls(**values).validate()

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> "SimConfig":
        try:
            document = json.loads(Path(path).read_text())
        except (OSError, ValueError) as e:
            raise ConfigError(f"Cannot read simulation config {path}: {e}")
        if not isinstance(document, dict):
            raise ConfigError("simulation config must be a JSON object")
        return cls.from_dict(document)

    def to_json(self) -> str:
        document = asdict(self)
        document["lambdas"] = list(self.lambdas)
        return json.dumps(document, indent=2)

    def with_lambda(self, lambda_: float) -> "SimConfig":
        return SimConfig(**{**asdict(self), "arrival_rate_lambda": float(lambda_), "lambdas": self.lambdas})


def slot_rng(seed: int, slot: int) -> np.random.Generator:
    """Independent stream per (run seed, slot); both schedulers see the same arrivals."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(slot,)))


def run_seed(base_seed: int, run: int) -> int:
    return int(np.random.SeedSequence([base_seed, run]).generate_state(1, dtype=np.uint64)[0])


def sample_tcc(rng: np.random.Generator, size: int, mean: float = 4.0) -> np.ndarray:
    """Geometric on {1, 2, ...} with success probability 1/mean."""
    return rng.geometric(1.0 / mean, size=size)


def sample_arrivals(rng: np.random.Generator, lambda_: float, size=None):
    return rng.poisson(lambda_, size=size)


def requested_power(battery_capacity: int, soc_Sv: int) -> int:
    """Energy to fill the battery, rounded half-up to whole kW, never zero."""
    return max(1, (battery_capacity * (1000 - soc_Sv) + 500) // 1000)


def esu_address(seed: int, slot: int, index: int) -> bytes:
    return hashlib.sha256(f"{seed}:{slot}:{index}".encode()).digest()[-20:]


def generate_population(config: SimConfig, slot: int, rng: np.random.Generator,
                        seed: int = 0) -> List[EsuDemand]:
    count = config.initial_esus if slot == 0 else int(sample_arrivals(rng, config.arrival_rate_lambda))
    if count == 0:
        return []
    socs = rng.integers(0, 1000, size=count)
    tccs = sample_tcc(rng, count, config.tcc_mean)
    return [
        EsuDemand(
            esu_address(seed, slot, i),
            requested_power(config.battery_capacity, int(socs[i])),
            int(socs[i]),
            int(tccs[i]),
            i,
        )
        for i in range(count)
    ]
