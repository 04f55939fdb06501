import pytest

from dipole_decoherence.qgem import GasSpecies, induced_crystal_dipole
from dipole_decoherence.rates import EnvironmentSpec, SuperpositionSpec
from dipole_decoherence.scattering import DipolePair, ScatteringContext

M_ENV = 1e-27
T_BASE = 1.0
R_BASE = 1e-6
N_BASE = 1e8
D2_BASE = 1e-29


def make_setup(d1=1e-30, d2=D2_BASE, m=M_ENV, R=R_BASE, T=T_BASE, n=N_BASE):
    species = GasSpecies("probe", m, d2)
    return ScatteringContext(DipolePair(d1, d2), m, R), EnvironmentSpec(species, T, n)


@pytest.fixture
def baseline():
    """Dielectric crystal polarised by a 1e-29 C m environmental dipole."""
    return make_setup(d1=induced_crystal_dipole(D2_BASE, 5.7))


@pytest.fixture
def superposition():
    return SuperpositionSpec(1e-5)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
