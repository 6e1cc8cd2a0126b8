import pytest

from framedcurves.errors import FramingError
from framedcurves.framing import (
    Framing,
    arf_of,
    direct_image_values,
    framing_from_gsb,
    invariants,
    pushforward_values,
    reproduces_values,
    restrict,
    same_orbit,
    winding_number,
)
from framedcurves.resources.triangulation import canonical_triangulation
from framedcurves.surface_core import (
    TOTAL_BOUND,
    MappingClassWord,
    OrientedCurve,
    algebraic_intersection,
    cut,
    enumerate_multicurves,
    gsb_curves,
    puncture_loop,
    single_curves,
    twist_oriented,
)
from framedcurves.resources.walks import rotate_min


def test_values_on_the_basis(phi_zero, tri31):
    assert reproduces_values(phi_zero)
    phi = framing_from_gsb(tri31, [1, 2, 3, 4, 5, 6], [-5])
    assert reproduces_values(phi)
    assert [winding_number(phi, c) for c in gsb_curves(tri31)] == [1, 2, 3, 4, 5, 6]


def test_puncture_loops_carry_the_signature():
    tri = canonical_triangulation(3, 2)
    phi = framing_from_gsb(tri, [0] * 6, [-1, -5])
    assert [winding_number(phi, puncture_loop(tri, p)) for p in range(2)] == [-1, -5]


def test_reversal_negates(tri31):
    phi = framing_from_gsb(tri31, [3, -2, 0, 0, 1, 0], [-5])
    for c in gsb_curves(tri31):
        assert winding_number(phi, c.reverse()) == -winding_number(phi, c)


@pytest.mark.parametrize("signature", [[-4], [-6], [0]])
def test_signature_must_sum_to_euler_characteristic(tri31, signature):
    with pytest.raises(FramingError):
        framing_from_gsb(tri31, [0] * 6, signature)


def test_wrong_number_of_values(tri31):
    with pytest.raises(FramingError):
        framing_from_gsb(tri31, [0] * 4, [-5])


def test_inverse_twist_on_one_holed_torus(tri11):
    phi = framing_from_gsb(tri11, [2, 1], [-1])
    a, b = gsb_curves(tri11)
    assert winding_number(phi, twist_oriented(b, a.underlying, -1)) == 3
    assert winding_number(phi, twist_oriented(b, a.underlying, 1)) == -1


def _twist_linearity_cases(tri, rng, samples):
    pool = [OrientedCurve(tri.surface, rotate_min(w)) for w in single_curves(tri, 6)]
    for _ in range(samples):
        a = pool[rng.randrange(len(pool))]
        b = pool[rng.randrange(len(pool))]
        if rng.random() < 0.5:
            b = b.reverse()
        yield a, b, rng.randint(-3, 3)


def _check_twist_linearity(tri, rng, samples):
    values = [rng.randint(-4, 4) for _ in range(2 * tri.genus)]
    phi = framing_from_gsb(tri, values, [tri.surface.euler])
    for a, b, k in _twist_linearity_cases(tri, rng, samples):
        image = twist_oriented(b, a.underlying, k)
        expected = winding_number(phi, b) + k * algebraic_intersection(b, a) * winding_number(phi, a)
        assert winding_number(phi, image) == expected


def test_twist_linearity(tri31, rng):
    _check_twist_linearity(tri31, rng, 40)


@pytest.mark.slow
def test_twist_linearity_at_scale(tri31, rng):
    for _ in range(25):
        _check_twist_linearity(tri31, rng, 40)


def test_arf_spot_values():
    assert arf_of((0, 0, 0, 0)) == 0
    assert arf_of((0, 0, 0, 1)) == 1
    assert arf_of((1, 1, 1, 1)) == 0


@pytest.mark.parametrize(
    "g, n, values, signature, expected",
    [(1, 1, (2, 4), (-1,), 2), (1, 2, (3, 5), (-1, -1), 1), (1, 1, (0, 0), (-1,), 0)],
)
def test_arf1(g, n, values, signature, expected):
    phi = framing_from_gsb(canonical_triangulation(g, n), values, signature)
    assert invariants(phi).arf1 == expected


def test_arf1_by_enumeration_agrees():
    phi = framing_from_gsb(canonical_triangulation(1, 1), (2, 4), (-1,))
    assert invariants(phi, arf1_sample_bound=8).arf1 == 2


def test_requested_arf_is_enforced(tri21):
    with pytest.raises(FramingError):
        framing_from_gsb(tri21, (0, 0, 0, 0), (-3,), arf=1)
    phi = framing_from_gsb(tri21, (0, 0, 0, 1), (-3,), arf=1)
    assert invariants(phi).arf == 1


def test_invariant_types(tri31):
    phi = framing_from_gsb(tri31, [0] * 6, [-5])
    found = invariants(phi)
    assert found.spin_type and found.holomorphic_type
    assert found.arf == arf_of([0] * 6)
    tri = canonical_triangulation(3, 2)
    found = invariants(framing_from_gsb(tri, [0] * 6, [2, -8]))
    assert not found.spin_type and not found.holomorphic_type
    assert found.arf is None


def test_same_orbit(tri21):
    first = invariants(framing_from_gsb(tri21, (0, 0, 0, 1), (-3,)))
    second = invariants(framing_from_gsb(tri21, (2, 0, 4, 1), (-3,)))
    third = invariants(framing_from_gsb(tri21, (0, 0, 0, 0), (-3,)))
    assert same_orbit(first, second)
    assert not same_orbit(first, third)


def test_arf_survives_mapping_classes(tri21, rng):
    phi = framing_from_gsb(tri21, (0, 0, 0, 1), (-3,))
    for _ in range(10):
        word = MappingClassWord.random(tri21, rng, 3)
        pushed = pushforward_values(phi, word)
        assert pushed == direct_image_values(phi, word)
        assert arf_of(pushed) == arf_of(phi.gsb_values)


def test_round_trip(tri31):
    phi = framing_from_gsb(tri31, [1, 0, 2, 0, 3, -1], [-5])
    assert Framing.from_dict(phi.to_dict()) == phi


def test_homological_coherence(tri31, rng):
    values = [rng.randint(-3, 3) for _ in range(6)]
    phi = framing_from_gsb(tri31, values, [-5])
    checked = 0
    for gamma in enumerate_multicurves(tri31, 7, max_components=3, bound_mode=TOTAL_BOUND):
        for piece in cut(gamma).components:
            assert restrict(phi, gamma, piece.index, with_arf=False).coherent
            checked += 1
    assert checked > 0
