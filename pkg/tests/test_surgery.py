import pytest

from framedcurves.errors import GraphError, SurgeryError
from framedcurves.framing import framing_from_gsb
from framedcurves.surface_core import (
    MappingClassWord,
    cut,
    geometric_intersection,
    is_genus_separating,
    meets_component,
    multicurve_of,
    neighborhood_boundary,
    single_curves,
)
from framedcurves.surgery import (
    adjust_inside,
    anchor_curve,
    crossings_by_component,
    psi_construct,
    psi_member,
    psi_to_pi_pipeline,
    surgery_chain,
    surgery_reduce,
)
from framedcurves.witness import is_admissible, is_k_vertex


def _crossing_curves(tri, c, bound, limit):
    found = []
    for word in single_curves(tri, bound):
        a = multicurve_of(tri, [word])
        if 1 <= geometric_intersection(a, c) <= 6:
            found.append(a)
            if len(found) == limit:
                break
    return found


def test_surgery_reduces_intersection(tri31, torus_boundary31):
    candidates = _crossing_curves(tri31, torus_boundary31, 8, 3)
    assert candidates
    for a in candidates:
        step = surgery_reduce(a, torus_boundary31)
        before, after = step.intersections
        assert before == geometric_intersection(a, torus_boundary31)
        assert after == geometric_intersection(a, step.after) < before
        assert geometric_intersection(step.after, torus_boundary31) == 0
        assert is_genus_separating(step.after)


def test_surgery_chain_terminates(tri31, torus_boundary31):
    for a in _crossing_curves(tri31, torus_boundary31, 8, 2):
        steps = surgery_chain(a, torus_boundary31)
        assert len(steps) <= geometric_intersection(a, torus_boundary31)
        assert geometric_intersection(a, steps[-1].after) == 0


def test_surgery_preconditions(basis31, torus_boundary31):
    with pytest.raises(SurgeryError):
        surgery_reduce(basis31[1], basis31[0])
    with pytest.raises(SurgeryError):
        surgery_reduce(basis31[0], torus_boundary31)


def test_psi_needs_a_model_graph_vertex(flat31, torus_boundary31):
    with pytest.raises(GraphError):
        psi_member(flat31.framing, flat31.alpha, torus_boundary31)
    with pytest.raises(GraphError):
        psi_construct(flat31.framing, flat31.alpha)


def test_psi_construction_on_a_basis_curve(phi_zero, basis31):
    alpha = basis31[0]
    c = psi_construct(phi_zero, alpha)
    assert is_genus_separating(c)
    assert psi_member(phi_zero, alpha, c)


def test_crossings_split_by_piece(basis31, torus_boundary31):
    a1, b1 = basis31[0], basis31[1]
    counts = crossings_by_component(a1, b1, torus_boundary31)
    assert sum(counts.values()) == 1
    assert crossings_by_component(a1, a1, torus_boundary31) == {}


def _handle_boundaries(tri):
    return [neighborhood_boundary(list(tri.gsb[k : k + 2]), tri=tri)[0] for k in (0, 2, 4)]


def _surgery_pairs(tri, rng, count):
    tori = _handle_boundaries(tri)
    pool = single_curves(tri, 8)
    twists = single_curves(tri, 6)
    pairs = []
    for _ in range(50 * count):
        word = MappingClassWord.random(tri, rng, 1, pool=twists, max_power=1)
        c = word.apply(rng.choice(tori))
        a = multicurve_of(tri, [rng.choice(pool)])
        if 1 <= geometric_intersection(a, c) <= 6:
            pairs.append((a, c))
            if len(pairs) == count:
                break
    return pairs


@pytest.mark.slow
def test_surgery_contract_on_seeded_pairs(tri31, rng):
    pairs = _surgery_pairs(tri31, rng, 200)
    assert len(pairs) == 200
    for a, c in pairs:
        before = geometric_intersection(a, c)
        step = surgery_reduce(a, c)
        assert geometric_intersection(a, step.after) < before
        assert geometric_intersection(c, step.after) == 0
        assert is_genus_separating(step.after)
        assert len(surgery_chain(a, c)) <= before


def _model_vertices(tri, rng, count):
    starts = [multicurve_of(tri, [tri.gsb[k] for k in ks]) for ks in ((0,), (0, 2), (0, 2, 4))]
    return [MappingClassWord.random(tri, rng, 2, max_power=1).apply(starts[k % 3]) for k in range(count)]


@pytest.mark.slow
def test_psi_on_random_model_vertices(tri31, phi_zero, rng):
    # basis curves have winding 0 here, so twisting about them preserves the framing
    for alpha in _model_vertices(tri31, rng, 100):
        assert is_k_vertex(phi_zero, alpha)
        c = psi_construct(phi_zero, alpha)
        assert is_genus_separating(c)
        assert psi_member(phi_zero, alpha, c)


def test_anchor_prefers_an_admissible_curve_of_the_multicurve(phi_zero, basis31, torus_boundary31):
    a1 = basis31[0]
    assert anchor_curve(phi_zero, a1, torus_boundary31, 0, 8) == (a1, 0)


def test_anchor_searches_off_the_piece(phi_zero, basis31, torus_boundary31):
    bound = max(c.total_weight for c in basis31)
    torus = cut(torus_boundary31).component_of(basis31[0])
    curve, used = anchor_curve(phi_zero, torus_boundary31, basis31[0], torus, bound)
    assert used == bound
    assert curve is not None
    assert is_admissible(phi_zero, curve)
    assert not meets_component(curve, torus_boundary31, torus)
    assert geometric_intersection(curve, basis31[0]) == 0


def test_anchor_gives_up_when_every_curve_meets_the_piece(tri31, basis31, torus_boundary31):
    phi = framing_from_gsb(tri31, [1, 0, 0, 0, 0, 0], [-5])
    assert anchor_curve(phi, basis31[0], torus_boundary31, 0, 8) == (None, 8)


def test_adjust_keeps_a_curve_already_off_the_multicurve(phi_zero, tri31, basis31, torus_boundary31):
    a3 = basis31[4]
    c, d = torus_boundary31, _handle_boundaries(tri31)[1]
    assert adjust_inside(phi_zero, a3, c, d, 0, 8) == (c, 0)
    crossing = _crossing_curves(tri31, c, 8, 1)[0]
    inside = crossings_by_component(c, crossing, a3)[0]
    assert inside == geometric_intersection(c, crossing)
    assert adjust_inside(phi_zero, a3, c, crossing, 0, 8, max_inside=inside) == (c, 0)
    assert adjust_inside(phi_zero, a3, c, crossing, 0, 8, max_inside=inside - 1) == (None, 0)


@pytest.mark.slow
def test_pipeline_stays_under_ceiling(tri31, phi_zero, basis31):
    alpha = basis31[0]
    c = psi_construct(phi_zero, alpha)
    d = min((t for t in _handle_boundaries(tri31)[1:] if t != c), key=lambda t: geometric_intersection(c, t))
    assert psi_member(phi_zero, alpha, d)
    result = psi_to_pi_pipeline(phi_zero, alpha, c, d, 12)
    assert (result.start, result.target) == (c, d)
    assert result.ceiling == 10
    assert psi_member(phi_zero, alpha, result.result)
    assert result.intersections == geometric_intersection(result.result, d)
    assert result.ok
