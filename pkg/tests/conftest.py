import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from glslab.periodic_field import PeriodicGrid, TrigPolynomial, sample_catalog
from glslab.psi_space import PGrid, make_psi

settings.register_profile(
    "glslab",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("glslab")


@pytest.fixture(scope="session")
def grid1024():
    return PeriodicGrid(1024)


@pytest.fixture(scope="session")
def psi2():
    return make_psi("psi_m", m=2)


@pytest.fixture(scope="session")
def pgrid_inf():
    return PGrid.for_support(math.inf)


@pytest.fixture(scope="session")
def catalog_members():
    """Every catalog entry with its default parameters, sampled at N = 1024."""
    out = {}
    for name in ("constant", "cosk", "holder", "holder_smooth", "logsing", "step"):
        out[name] = sample_catalog(name, grid=PeriodicGrid.midpoint(1024) if name == "logsing" else PeriodicGrid(1024))
    return out


def random_polynomial(rng: np.random.Generator, degree: int, shift: float = 0.0) -> TrigPolynomial:
    a = rng.normal(size=degree)
    b = rng.normal(size=degree)
    return TrigPolynomial.from_real(shift + rng.normal(), a, b)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: s.split("criterion ")[1][:2]):
            terminalreporter.write_line(line)
