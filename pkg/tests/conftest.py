import random

import pytest

from framedcurves.framing import framing_from_gsb
from framedcurves.resources.triangulation import canonical_triangulation
from framedcurves.surface_core import multicurve_of, neighborhood_boundary
from framedcurves.witness import find_disjoint_flat

SEED = 20240611


@pytest.fixture
def rng():
    return random.Random(SEED)


@pytest.fixture(scope="session")
def tri11():
    return canonical_triangulation(1, 1)


@pytest.fixture(scope="session")
def tri21():
    return canonical_triangulation(2, 1)


@pytest.fixture(scope="session")
def tri31():
    return canonical_triangulation(3, 1)


@pytest.fixture(scope="session")
def phi_zero(tri31):
    """Every basis curve admissible; signature (-5)."""
    return framing_from_gsb(tri31, [0] * 6, [-5])


@pytest.fixture(scope="session")
def basis31(tri31):
    """a_1, b_1, a_2, b_2, a_3, b_3 as unoriented curves."""
    return [multicurve_of(tri31, [w]) for w in tri31.gsb]


@pytest.fixture(scope="session")
def torus_boundary31(tri31, basis31):
    """Genus-separating curve cutting a_1, b_1 off as a one-holed torus."""
    boundary, _ = neighborhood_boundary([basis31[0].components[0], basis31[1].components[0]], tri=tri31)
    return boundary


@pytest.fixture(scope="session")
def flat31():
    return find_disjoint_flat(3, 1, [-5])
