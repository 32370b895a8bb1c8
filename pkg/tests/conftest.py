import pytest

from hgineq.groups import anisotropic_group, euclidean_group, heisenberg_group
from hgineq.profiles import DEFAULT_GRID, standard_battery


@pytest.fixture(scope="session")
def groups():
    """The three standard verification groups (Q = 3, 3, 4)."""
    return [euclidean_group(3), anisotropic_group((1.0, 2.0)), heisenberg_group()]


@pytest.fixture(scope="session")
def heis():
    return heisenberg_group()


@pytest.fixture(scope="session")
def battery():
    return standard_battery(DEFAULT_GRID)
