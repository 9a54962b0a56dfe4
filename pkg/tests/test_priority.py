from fractions import Fraction

import pytest

from errors import ValidationError
from scheduler import EsuDemand, SchedulerParams, f_of_tcc, priority
from tests.conftest import make_demand


def test_f_of_tcc_values() -> None:
    assert f_of_tcc(1) == 1000
    assert f_of_tcc(2) == 500
    assert f_of_tcc(3) == 0
    assert f_of_tcc(7) == 0


def test_f_of_tcc_rejects_zero() -> None:
    with pytest.raises(ValidationError):
        f_of_tcc(0)


@pytest.mark.parametrize("soc, tcc, expected", [
    (0, 1, 1000),
    (990, 7, 5),
    (400, 2, 550),
    (200, 1, 900),
    (400, 1, 800),
    (0, 3, 500),
])
def test_priority_examples(soc, tcc, expected) -> None:
    params = SchedulerParams(500, 500)
    assert priority(make_demand(0, 5, soc, tcc), params).value_U == expected


def test_priority_matches_rational_oracle() -> None:
    for beta1 in range(0, 1001, 125):
        params = SchedulerParams(beta1, 1000 - beta1)
        for soc in range(0, 1000, 37):
            for tcc in (1, 2, 3, 5):
                f = {1: Fraction(1), 2: Fraction(1, 2)}.get(tcc, Fraction(0))
                exact = Fraction(beta1, 1000) * (1 - Fraction(soc, 1000)) + Fraction(1000 - beta1, 1000) * f
                value = priority(make_demand(0, 1, soc, tcc), params).value_U
                assert value == int(exact * 1000)
                assert 0 <= value <= 1000


def test_priority_monotone_in_soc_and_tcc() -> None:
    params = SchedulerParams(300, 700)
    for tcc in (1, 2, 3, 4):
        values = [priority(make_demand(0, 1, soc, tcc), params).value_U for soc in range(0, 1000, 10)]
        assert values == sorted(values, reverse=True)
    for soc in (0, 500, 999):
        values = [priority(make_demand(0, 1, soc, tcc), params).value_U for tcc in range(1, 8)]
        assert values == sorted(values, reverse=True)


@pytest.mark.parametrize("kwargs", [
    {"beta1": 600, "beta2": 500},
    {"beta1": -1, "beta2": 1001},
    {"capacity_C": 10, "regular_load_PR": 11},
    {"capacity_C": -5},
])
def test_params_validate_rejects(kwargs) -> None:
    with pytest.raises(ValidationError):
        SchedulerParams(**kwargs).validate()


def test_params_available() -> None:
    assert SchedulerParams(capacity_C=1000, regular_load_PR=250).validate().available == 750


@pytest.mark.parametrize("power, soc, tcc, field", [
    (0, 0, 1, "power_Pv"),
    (5, 1000, 1, "soc_Sv"),
    (5, -1, 1, "soc_Sv"),
    (5, 0, 0, "tcc_Kv"),
])
def test_demand_validate_names_field(power, soc, tcc, field) -> None:
    with pytest.raises(ValidationError, match=field):
        EsuDemand(b"a" * 20, power, soc, tcc, 0).validate()
