import pytest

from cauchyfem.mesh import unit_square_mesh
from cauchyfem.problem import quartic_example


@pytest.fixture(scope="session")
def mesh1():
    return unit_square_mesh(1)


@pytest.fixture(scope="session")
def mesh2():
    return unit_square_mesh(2)


@pytest.fixture(scope="session")
def mesh4():
    return unit_square_mesh(4)


@pytest.fixture(scope="session")
def mesh8():
    return unit_square_mesh(8)


@pytest.fixture(scope="session")
def problem():
    return quartic_example()
