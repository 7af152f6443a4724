import pytest

from unitlinked import BlackScholesParams, HestonParams, VasicekParams
from unitlinked.mortality import bundled_table, fit_table

_ACCEPTANCE = []


@pytest.fixture
def vasicek():
    return VasicekParams(k=0.3, theta=0.01, sigma=0.02, r0=0.01)


@pytest.fixture
def heston():
    return HestonParams(kappa=1e-3, nu_bar=0.01, eta=0.01, nu0=0.04, mu=0.015, s0=100.0)


@pytest.fixture
def heston_unit():
    return HestonParams(kappa=1e-3, nu_bar=0.01, eta=0.01, nu0=0.04, mu=0.015, s0=1.0)


@pytest.fixture
def bs_unit():
    return BlackScholesParams(s0=1.0, r=0.01, sigma=0.04)


@pytest.fixture(scope="session")
def norway_fit():
    return fit_table(bundled_table())


@pytest.fixture
def acceptance_log():
    def record(number, passed, detail):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        _ACCEPTANCE.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
