import pytest

from framedcurves.errors import WitnessError
from framedcurves.framing import framing_from_gsb, invariants, restrict, winding_of_walk
from framedcurves.resources.triangulation import canonical_triangulation
from framedcurves.surface_core import (
    cut,
    curves_in_component,
    multicurve_of,
    neighborhood_boundary,
    search_in_component,
)
from framedcurves.witness import (
    FlatCertificate,
    WitnessQuery,
    check_certificate,
    complement_pieces,
    find_disjoint_flat,
    is_admissible,
    is_k_vertex,
    is_witness,
    third_witness_candidates,
    witness_components,
    wn0_subset_exists,
)


@pytest.mark.parametrize(
    "windings, expected",
    [
        ((-1, -1, -1, -1), False),
        ((0, -1, 0, -1), True),
        ((-1, -1, -1), False),
        ((-2, 1, -3, 0, -2), True),
        ((11, 22, 33, -68), False),
    ],
)
def test_subset_rule(windings, expected):
    assert bool(wn0_subset_exists(windings)) is expected


def test_subset_rule_names_the_subset():
    found = wn0_subset_exists((0, -1, 0, -1))
    assert len(found.subset) == 2
    assert sum((0, -1, 0, -1)[i] for i in found.subset) == -1


def test_split_circles_must_be_separated():
    found = wn0_subset_exists((0, -1, 0, -1), split={0, 1})
    assert found
    assert len(set(found.subset) & {0, 1}) == 1
    assert not wn0_subset_exists((0, -1, -2, -3), split={0, 1})


def test_admissible_basis_curves(tri31, phi_zero, basis31, torus_boundary31):
    assert all(is_admissible(phi_zero, c) for c in basis31)
    phi = framing_from_gsb(tri31, [1, 0, 0, 0, 0, 0], [-5])
    assert not is_admissible(phi, basis31[0])
    assert is_admissible(phi, basis31[1])
    assert not is_admissible(phi_zero, torus_boundary31)


def test_admissible_rim_is_not_a_witness(phi_zero, basis31):
    verdict = is_witness(WitnessQuery(basis31[0], 0, phi_zero))
    assert not verdict
    assert verdict.reason == "a boundary curve is admissible"


def test_complement_with_genus_is_not_a_witness(tri31, torus_boundary31):
    phi = framing_from_gsb(tri31, [5, 7, 0, 0, 0, 0], [-5])
    torus = cut(torus_boundary31).component_of(multicurve_of(tri31, [tri31.gsb[0]]))
    verdict = is_witness(WitnessQuery(torus_boundary31, torus, phi))
    assert not verdict
    assert verdict.reason == "complement has genus, contains admissible curve"
    assert [c["clause"] for c in verdict.clauses] == ["proper", "boundary_not_admissible", "complement_genus_zero"]


def test_witness_needs_genus_three(tri21):
    phi = framing_from_gsb(tri21, [0] * 4, [-3])
    gamma = multicurve_of(tri21, [tri21.gsb[0]])
    with pytest.raises(WitnessError):
        is_witness(WitnessQuery(gamma, 0, phi))


def test_flat_certificate_on_one_puncture(flat31):
    assert flat31.x == (11, 22, 33, -68)
    assert flat31.positive_punctures == ()
    assert flat31.w_plus != flat31.w_minus
    assert all(result["passed"] for result in check_certificate(flat31))
    assert witness_components(flat31.framing, flat31.alpha) == sorted([flat31.w_plus, flat31.w_minus])
    assert not is_k_vertex(flat31.framing, flat31.alpha)


def test_flat_certificate_pieces_have_no_genus(flat31):
    decomposition = cut(flat31.alpha)
    assert [c.genus for c in decomposition.components] == [0, 0]
    for z in complement_pieces(flat31.framing, flat31.alpha, flat31.w_plus):
        assert z.genus == 0


def test_certificate_round_trip(flat31):
    again = FlatCertificate.from_dict(flat31.to_dict())
    assert again == flat31
    assert all(result["passed"] for result in check_certificate(again))


def test_perturbed_certificate_fails(flat31):
    record = flat31.to_dict()
    record["x"][1] += 1
    results = check_certificate(FlatCertificate.from_dict(record))
    failed = [r["clause"] for r in results if not r["passed"]]
    assert failed[0] == "windings"
    assert "coherence" in failed


@pytest.mark.parametrize(
    "g, n, signature, x",
    [
        (3, 2, (-1, -5), (13, 26, 39, -80)),
        (3, 2, (2, -8), (21, 42, 63, -131)),
        (4, 1, (-7,), (15, 30, 45, 60, -153)),
    ],
)
def test_flat_certificates_elsewhere(g, n, signature, x):
    certificate = find_disjoint_flat(g, n, signature)
    assert certificate.x == x
    assert all(result["passed"] for result in check_certificate(certificate))


@pytest.mark.parametrize("arf", [0, 1])
def test_flat_certificate_with_requested_arf(arf):
    certificate = find_disjoint_flat(3, 1, [-5], arf=arf)
    assert invariants(certificate.framing).arf == arf
    assert certificate.x == (11, 22, 33, -68)
    assert all(result["passed"] for result in check_certificate(certificate))


@pytest.mark.parametrize(
    "g, n, signature",
    [(2, 1, (-3,)), (3, 1, (-4,)), (3, 2, (-1, -4))],
)
def test_flat_certificate_rejects(g, n, signature):
    with pytest.raises(WitnessError):
        find_disjoint_flat(g, n, signature)


@pytest.mark.slow
def test_no_admissible_curve_misses_the_witness(flat31):
    phi = flat31.framing
    for curve in curves_in_component(flat31.alpha, flat31.w_minus, 12):
        assert not is_admissible(phi, curve)


def test_all_a_curves_with_admissible_rim():
    tri = canonical_triangulation(3, 1)
    phi = framing_from_gsb(tri, [0] * 6, [-5])
    a_curves = multicurve_of(tri, [tri.gsb[0], tri.gsb[2], tri.gsb[4]])
    assert not is_witness(WitnessQuery(a_curves, 0, phi))


def _genus_zero_cuts(tri):
    """Multicurves with a genus-0 piece of four, five and six circles."""
    t1, t2, t3 = (neighborhood_boundary(list(tri.gsb[k : k + 2]), tri=tri)[0] for k in (0, 2, 4))
    a2, a3 = (multicurve_of(tri, [tri.gsb[k]]) for k in (2, 4))
    return [t1.union(t2).union(t3), t1.union(t3).union(a2), t1.union(a2).union(a3)]


@pytest.mark.slow
def test_subset_rule_agrees_with_curve_search(tri31, rng):
    checked = 0
    for gamma in _genus_zero_cuts(tri31):
        for piece in cut(gamma).components:
            if piece.genus > 0 or not 4 <= piece.circles <= 6:
                continue
            nearby = curves_in_component(gamma, piece.index, 16)
            for _ in range(12):
                phi = framing_from_gsb(tri31, [rng.randint(-3, 3) for _ in range(6)], [-5])

                def flat(c, phi=phi):
                    return winding_of_walk(phi, c.components[0]) == 0

                predicted = wn0_subset_exists(restrict(phi, gamma, piece.index, with_arf=False).windings).found
                found = next((c for c in nearby if flat(c)), None)
                if found is None and predicted:
                    found, _ = search_in_component(gamma, piece.index, flat, 16, 24)
                assert (found is not None) == predicted
                checked += 1
    assert checked == 36


@pytest.mark.slow
def test_no_third_witness_misses_both(flat31):
    assert third_witness_candidates(flat31, 6) == []
