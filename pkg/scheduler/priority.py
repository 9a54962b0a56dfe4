"""
Charging priority of an ESU.

All quantities are integers scaled per-mille (0..1000) so every replica of the
contract computes bit-identical priorities.
"""
from dataclasses import dataclass

from errors import ValidationError

PER_MILLE = 1000


@dataclass(frozen=True)
class SchedulerParams:
    beta1: int = 500
    beta2: int = 500
    capacity_C: int = 1000
    regular_load_PR: int = 0

    def validate(self) -> "SchedulerParams":
        for name in ("beta1", "beta2"):
            value = getattr(self, name)
            if not 0 <= value <= PER_MILLE:
                raise ValidationError(f"{name} must be in [0, 1000], got: {value}")
        if self.beta1 + self.beta2 != PER_MILLE:
            raise ValidationError(f"beta1 + beta2 must equal 1000, got: {self.beta1 + self.beta2}")
        if self.capacity_C < 0 or self.regular_load_PR < 0:
            raise ValidationError("capacity_C and regular_load_PR must be non-negative")
        if self.regular_load_PR > self.capacity_C:
            raise ValidationError(
                f"regular_load_PR ({self.regular_load_PR}) exceeds capacity_C ({self.capacity_C})"
            )
        return self

    @property
    def available(self) -> int:
        return self.capacity_C - self.regular_load_PR


@dataclass(frozen=True)
class EsuDemand:
    id: bytes
    power_Pv: int
    soc_Sv: int
    tcc_Kv: int
    arrival_seq: int

    def validate(self) -> "EsuDemand":
        if self.power_Pv <= 0:
            raise ValidationError(f"power_Pv must be positive, got: {self.power_Pv}")
        if not 0 <= self.soc_Sv < PER_MILLE:
            raise ValidationError(f"soc_Sv must be in [0, 1000), got: {self.soc_Sv}")
        if self.tcc_Kv < 1:
            raise ValidationError(f"tcc_Kv must be >= 1, got: {self.tcc_Kv}")
        return self


@dataclass(frozen=True, order=True)
class Priority:
    value_U: int


def f_of_tcc(tcc_Kv: int) -> int:
    """Urgency term F(Kv): 1 for one slot left, 0.5 for two, 0 otherwise."""
    if tcc_Kv < 1:
        raise ValidationError(f"tcc_Kv must be >= 1, got: {tcc_Kv}")
    if tcc_Kv == 1:
        return PER_MILLE
    if tcc_Kv == 2:
        return PER_MILLE // 2
    return 0


def priority(demand: EsuDemand, params: SchedulerParams) -> Priority:
    # one truncating division, after both weighted terms are summed
    weighted = params.beta1 * (PER_MILLE - demand.soc_Sv) + params.beta2 * f_of_tcc(demand.tcc_Kv)
    return Priority(weighted // PER_MILLE)
