import datetime

import pytest

from credentials import CommonMessage, IdentityKeyPair, Issuer, UtilityKeyPair, acquire_tokens
from ledger.chain import Chain, append_block
from ledger.transactions import DeployPayload, deploy_tx
from scheduler import EsuDemand, SchedulerParams

START_DATE = datetime.date(2024, 1, 1)
COMMUNITY = "community-1"


def make_demand(seq: int, power: int, soc: int = 0, tcc: int = 3) -> EsuDemand:
    return EsuDemand(bytes([seq + 1]) * 20, power, soc, tcc, seq)


@pytest.fixture
def params():
    return SchedulerParams(beta1=500, beta2=500, capacity_C=10, regular_load_PR=0)


@pytest.fixture(scope="session")
def utility():
    return UtilityKeyPair.generate()


@pytest.fixture(scope="session")
def identity():
    return IdentityKeyPair.generate()


@pytest.fixture(scope="session")
def common():
    return CommonMessage(START_DATE, COMMUNITY)


@pytest.fixture
def issuer(utility):
    return Issuer(utility, quota=10, period_days=7)


@pytest.fixture(scope="session")
def token_pool(utility, identity, common):
    """Pseudonym/token pairs issued once for the whole session."""
    issuer = Issuer(utility, quota=64, period_days=7)
    issuer.register_identity(identity.public_bytes)
    return acquire_tokens(issuer, identity, common, 40)


def deploy_payload(utility, capacity=10, regular_load=0, community=COMMUNITY) -> DeployPayload:
    return DeployPayload(capacity, regular_load, community, utility.public_bytes, START_DATE)


@pytest.fixture
def deployed_chain(utility):
    chain = Chain()
    append_block(chain, [deploy_tx(utility, deploy_payload(utility))])
    return chain
