import mpmath
import pytest

from axion_optomech.axion import Geometry
from axion_optomech.constants import PAPER


@pytest.fixture
def mp40():
    with mpmath.workdps(40):
        yield mpmath.mp


@pytest.fixture(scope="session")
def paper_geometry():
    return Geometry.from_si(const=PAPER)
