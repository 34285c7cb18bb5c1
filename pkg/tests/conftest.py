import pytest
from hypothesis import HealthCheck, settings

from mtblowup import diagnostics
from mtblowup.shooting import TheoremOneConfig, solve_gtype, solve_nodal, solve_theorem1

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def t1_6():
    return solve_theorem1(TheoremOneConfig(1.0, 6.0))


@pytest.fixture(scope="session")
def t1_8():
    return solve_theorem1(TheoremOneConfig(1.0, 8.0))


@pytest.fixture(scope="session")
def gtype_6():
    return solve_gtype(2.0, 6.0)


@pytest.fixture(scope="session")
def gtype_9():
    return solve_gtype(2.0, 9.0)


@pytest.fixture(scope="session")
def anchor():
    return solve_gtype(2.0, 1.0)


@pytest.fixture(scope="session")
def nodal_16():
    return solve_nodal(1.0, 2, 16.0)


@pytest.fixture(scope="session")
def t1_report_6(t1_6):
    return diagnostics.report(t1_6)
