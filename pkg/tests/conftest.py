import pytest

from beaver_forge.ahe import keygen
from beaver_forge.constants import DOMAIN_KEYGEN
from beaver_forge.models.params import AheParams
from beaver_forge.seeding import derive_rng

SEED = 0xC0FFEE


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False,
        help="run full-size acceptance tests marked slow",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="full-size run; use --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def params():
    """Default parameter set: n=16, q=140737488356903, t=32843."""
    return AheParams()


@pytest.fixture(scope="session")
def keys(params):
    return keygen(params, derive_rng(SEED, DOMAIN_KEYGEN))


@pytest.fixture
def rng(request):
    """Fresh generator per test, keyed by the test name."""
    return derive_rng(SEED, request.node.name)
