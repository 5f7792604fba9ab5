import pytest

from liemodels.models import gtht_counterexample, sphere_product


@pytest.fixture(scope="session")
def gtht():
    return gtht_counterexample()


@pytest.fixture(scope="session")
def gtht_nil(gtht):
    from liemodels.derivations import nilradical
    return nilradical(gtht)


@pytest.fixture(scope="session")
def s2xs2():
    return sphere_product(2, 2)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
