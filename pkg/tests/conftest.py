import pytest
from hypothesis import HealthCheck, settings

from artifact.examples import abelian_double, heisenberg_double, sl2_double

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def abelian():
    return abelian_double(2)


@pytest.fixture(scope="session")
def heis():
    return heisenberg_double()


@pytest.fixture(scope="session")
def sl2():
    return sl2_double()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "VERDICTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
