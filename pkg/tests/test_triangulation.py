import pytest

from framedcurves.errors import SurfaceError
from framedcurves.resources.triangulation import SurfaceType, canonical_triangulation
from framedcurves.resources.crossings import algebraic_intersection_walks


@pytest.mark.parametrize(
    "g, n, triangles, edges",
    [(1, 1, 2, 3), (3, 1, 10, 15), (0, 3, 2, 3), (2, 2, 8, 12), (3, 2, 12, 18)],
)
def test_counts(g, n, triangles, edges):
    tri = canonical_triangulation(g, n)
    assert tri.n_triangles == triangles
    assert tri.n_edges == edges
    assert len(tri.faces) == n


@pytest.mark.parametrize("g, n", [(0, 1), (0, 2), (1, 0), (2, 0), (-1, 4)])
def test_rejects_non_hyperbolic_or_unpunctured(g, n):
    with pytest.raises(SurfaceError):
        canonical_triangulation(g, n)


def test_deterministic():
    first = canonical_triangulation(3, 2)
    second = canonical_triangulation(3, 2)
    assert first.twin == second.twin
    assert first.vertices == second.vertices
    assert first.gsb == second.gsb


@pytest.mark.parametrize("g, n", [(1, 1), (2, 1), (3, 1), (3, 2)])
def test_stored_basis_is_symplectic(g, n):
    tri = canonical_triangulation(g, n)
    assert len(tri.gsb) == 2 * g
    for i in range(g):
        assert algebraic_intersection_walks(tri, tri.gsb[2 * i], tri.gsb[2 * i + 1]) == 1
        for j in range(i + 1, g):
            for x in (tri.gsb[2 * i], tri.gsb[2 * i + 1]):
                for y in (tri.gsb[2 * j], tri.gsb[2 * j + 1]):
                    assert algebraic_intersection_walks(tri, x, y) == 0


def test_surface_type():
    surface = SurfaceType(3, 1)
    assert surface.euler == -5
    assert surface.complexity == 7
    assert surface.as_dict() == {"g": 3, "n": 1}
