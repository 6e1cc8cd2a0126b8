import random

import pytest

from framedcurves.errors import CurveError, SurfaceError
from framedcurves.resources.drawing import LEFT
from framedcurves.resources.triangulation import canonical_triangulation
from framedcurves.surface_core import (
    CONTAINED,
    DISJOINT,
    PARALLEL_PAIR,
    SINGLE_ARC,
    TOTAL_BOUND,
    MappingClassWord,
    NormalMulticurve,
    algebraic_intersection,
    arc_pattern,
    component_gsb,
    cut,
    enumerate_multicurves,
    geometric_intersection,
    gsb_curves,
    homology_rank_mod2,
    is_genus_separating,
    multicurve_of,
    neighborhood_boundary,
    orient,
    single_curves,
    subsurfaces_overlap,
    topological_type,
    twist,
)
from framedcurves.witness import cut_off_circles


def test_basis_intersections(tri31, basis31):
    a1, b1, a2, b2, a3, _ = basis31
    assert geometric_intersection(a1, b1) == 1
    assert geometric_intersection(a1, a2) == 0
    assert geometric_intersection(b1, b2) == 0
    assert geometric_intersection(a3, a3) == 0
    oriented = gsb_curves(tri31)
    assert algebraic_intersection(oriented[0], oriented[1]) == 1
    assert algebraic_intersection(oriented[1], oriented[0]) == -1


def test_weights_identify_the_curve(tri31, basis31):
    for curve in basis31:
        assert NormalMulticurve.from_weights(tri31, curve.weights) == curve
        assert NormalMulticurve.from_dict(curve.to_dict()) == curve


def test_rejects_bad_multicurves(tri31, basis31):
    a1, b1 = basis31[0], basis31[1]
    with pytest.raises(CurveError):
        NormalMulticurve.from_walks(tri31, [a1.components[0], b1.components[0]])
    with pytest.raises(CurveError):
        NormalMulticurve.from_walks(tri31, [a1.components[0], a1.components[0]])
    with pytest.raises(CurveError):
        NormalMulticurve.from_walks(tri31, [tri31.faces[0]])
    with pytest.raises(CurveError):
        a1.union(b1).require_single()


def test_surfaces_must_match(basis31):
    other = multicurve_of(canonical_triangulation(2, 1), [canonical_triangulation(2, 1).gsb[0]])
    with pytest.raises(SurfaceError):
        geometric_intersection(basis31[0], other)


def test_cut_along_basis_curves(tri31, basis31):
    a_curves = multicurve_of(tri31, [c.components[0] for c in basis31[0::2]])
    decomposition = cut(a_curves)
    assert len(decomposition.components) == 1
    piece = decomposition.components[0]
    assert piece.genus == 0
    assert piece.circles == 7
    assert decomposition.euler_total == -5


def test_nonseparating_and_genus_separating(basis31, torus_boundary31):
    a1 = basis31[0]
    assert not topological_type(a1).separating
    assert not is_genus_separating(a1)
    assert torus_boundary31.component_count == 1
    assert topological_type(torus_boundary31).separating
    assert is_genus_separating(torus_boundary31)
    genera = sorted(p.genus for p in cut(torus_boundary31).components)
    assert genera == [1, 2]


def test_neighborhood_of_handle_on_one_holed_torus_is_peripheral(tri11):
    boundary, discarded = neighborhood_boundary(list(tri11.gsb), tri=tri11)
    assert boundary.is_empty()
    assert discarded


@pytest.mark.parametrize("power", [-2, -1, 1, 2, 3])
def test_twist_about_dual_curve(basis31, power):
    a1, b1 = basis31[0], basis31[1]
    image = twist(b1, a1, power)
    assert geometric_intersection(image, a1) == 1
    assert geometric_intersection(image, b1) == abs(power)
    assert twist(a1, a1, power) == a1
    assert twist(twist(b1, a1, power), a1, -power) == b1


def test_twist_fixes_disjoint_curves(basis31):
    a1, a2, b2 = basis31[0], basis31[2], basis31[3]
    assert twist(a2, a1, 2) == a2
    assert twist(b2, a1, -3) == b2


def test_orientation_reverses(basis31):
    c = orient(basis31[0])
    assert c.reverse().reverse() == c
    assert c.reverse() != c
    assert c.underlying == basis31[0]


def test_small_enumeration_on_one_holed_torus(tri11):
    multicurves = list(enumerate_multicurves(tri11, 1))
    assert sorted(m.weights for m in multicurves) == [(0, 1, 1), (1, 0, 1), (1, 1, 0)]
    single = list(enumerate_multicurves(tri11, 1, single_component=True))
    assert single == multicurves


def test_total_weight_bound_is_opt_in(tri11):
    assert len(single_curves(tri11, 2)) == 3
    assert list(enumerate_multicurves(tri11, 1, bound_mode=TOTAL_BOUND)) == []
    by_total = list(enumerate_multicurves(tri11, 2, bound_mode=TOTAL_BOUND))
    assert by_total == list(enumerate_multicurves(tri11, 1))


def test_unknown_bound_mode_is_rejected(tri11):
    with pytest.raises(CurveError):
        list(enumerate_multicurves(tri11, 1, bound_mode="sum"))


def test_enumeration_is_deterministic_and_bounded(tri31):
    first = list(enumerate_multicurves(tri31, 6, max_components=2, bound_mode=TOTAL_BOUND))
    second = list(enumerate_multicurves(tri31, 6, max_components=2, bound_mode=TOTAL_BOUND))
    assert first == second
    assert len(set(first)) == len(first)
    assert all(m.total_weight <= 6 for m in first)
    assert all(m.component_count <= 2 for m in first)
    assert list(enumerate_multicurves(tri31, 0)) == []


@pytest.mark.slow
def test_edge_bound_caps_every_coordinate(tri21):
    found = list(enumerate_multicurves(tri21, 1, max_components=2))
    assert found
    assert all(max(m.weights) <= 1 for m in found)
    assert len(set(found)) == len(found)


def test_arc_pattern_of_disjoint_and_contained_curves(basis31, torus_boundary31):
    a1, a2 = basis31[0], basis31[2]
    decomposition = cut(torus_boundary31)
    torus = decomposition.component_of(a1)
    other = 1 - torus
    assert arc_pattern(a1, torus_boundary31, torus).kind == CONTAINED
    assert arc_pattern(a1, torus_boundary31, other).kind == DISJOINT
    assert arc_pattern(a2, torus_boundary31, other).kind == CONTAINED


def test_overlapping_pieces(torus_boundary31):
    assert subsurfaces_overlap(torus_boundary31, 0, torus_boundary31, 0)
    assert not subsurfaces_overlap(torus_boundary31, 0, torus_boundary31, 1)


def test_mapping_class_words_are_seeded(tri31, rng, basis31):
    word = MappingClassWord.random(tri31, rng, 4)
    again = MappingClassWord.random(tri31, random.Random(20240611), 4)
    assert word == again
    assert len(word) == 4
    for curve in basis31:
        assert word.inverse().apply(word.apply(curve)) == curve


def test_homology_rank_mod2(basis31, torus_boundary31):
    assert homology_rank_mod2([orient(c) for c in basis31]) == 6
    a1 = basis31[0]
    assert homology_rank_mod2([orient(a1), orient(a1, reverse=True)]) == 1
    assert homology_rank_mod2([orient(torus_boundary31)]) == 0


def test_gsb_inside_each_side_of_a_torus_boundary(torus_boundary31, basis31):
    decomposition = cut(torus_boundary31)
    torus = decomposition.component_of(basis31[0])
    other = 1 - torus
    assert len(component_gsb(torus_boundary31, torus)) == 1
    pairs = component_gsb(torus_boundary31, other)
    assert len(pairs) == 2
    curves = [orient(c) for pair in pairs for c in pair]
    assert homology_rank_mod2(curves) == 4
    for x, y in pairs:
        assert geometric_intersection(x, y) == 1
        assert geometric_intersection(x, torus_boundary31) == 0


def _twisted_pairs(tri, rng, samples, length):
    pool = [multicurve_of(tri, [w]) for w in single_curves(tri, 6)]
    for _ in range(samples):
        word = MappingClassWord.random(tri, rng, length, pool=[c.components[0] for c in pool], max_power=1)
        yield word, rng.choice(pool), rng.choice(pool)


def test_twists_preserve_intersections(tri31, rng):
    for word, c, d in _twisted_pairs(tri31, rng, 10, 2):
        assert geometric_intersection(word.apply(c), word.apply(d)) == geometric_intersection(c, d)
        assert is_genus_separating(word.apply(c)) == is_genus_separating(c)


@pytest.mark.slow
def test_twists_preserve_intersections_at_scale(tri31, rng):
    for word, c, d in _twisted_pairs(tri31, rng, 200, 3):
        assert geometric_intersection(word.apply(c), word.apply(d)) == geometric_intersection(c, d)


def _band_sum(first, second):
    gamma = first.union(second)
    sides = [(gamma.components.index(c.components[0]), LEFT) for c in (first, second)]
    return cut_off_circles(gamma, sides, [])


def test_neighborhood_of_two_curves_and_an_arc(basis31):
    a1, a3 = basis31[0], basis31[4]
    band = _band_sum(a1, a3)
    assert band.component_count == 1
    assert band not in (a1, a3)
    assert geometric_intersection(band, a1) == 0
    assert geometric_intersection(band, a3) == 0
    assert not is_genus_separating(band)
    assert homology_rank_mod2([orient(a1), orient(a3), orient(band)]) == 2


def test_arc_patterns_through_a_chain_of_pieces(tri31, basis31, torus_boundary31):
    last, _ = neighborhood_boundary([tri31.gsb[4], tri31.gsb[5]], tri=tri31)
    gamma = torus_boundary31.union(last)
    band = _band_sum(basis31[0], basis31[4])
    assert geometric_intersection(band, torus_boundary31) == 2
    assert geometric_intersection(band, last) == 2
    for piece in cut(gamma).components:
        pattern = arc_pattern(band, gamma, piece.index)
        if len(piece.boundary) == 2:
            assert pattern.kind == PARALLEL_PAIR
            assert pattern.arcs == 2
            assert len({end[0] for end in pattern.endpoints[0]}) == 2
        else:
            assert pattern.kind == SINGLE_ARC
            assert pattern.is_allowed()
