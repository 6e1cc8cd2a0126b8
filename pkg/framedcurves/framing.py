"""Winding-number functions of framings on the canonical triangulation.

A framing is evaluated as a reference turning count plus an integral
cochain.  The reference counts, for each pair of consecutive darts of a
reduced cyclic word, whether the walk passes the marked gap between slots 2
and 0 of the triangle, and subtracts one per dart traversed against its
edge.  The correction lives on the edges outside the spanning tree and is
solved exactly so that the stored basis and the punctures take the
requested values.
"""
import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from framedcurves.errors import EnumerationBoundError, FramedCurvesError, FramingError, SurfaceError
from framedcurves.resources.linalg import solve_integral
from framedcurves.resources.triangulation import SurfaceType, Triangulation, Walk
from framedcurves.resources.walks import reduce_walk, rotate_min
from framedcurves.surface_core import (
    LEFT,
    ComponentData,
    MappingClassWord,
    NormalMulticurve,
    OrientedCurve,
    homology_frame,
    multicurve_of,
    canonical_triangulation,
    component_gsb,
    cut,
    homology_class,
    single_curves,
    symplectic_pairing,
    topological_type,
    triangulation_of,
)

logger = logging.getLogger(__name__)


def reference_turning(tri: Triangulation, walk: Sequence[int]) -> int:
    """Winding number of a reduced cyclic word against the reference framing."""
    m = len(walk)
    gaps = 0
    backwards = 0
    for k in range(m):
        d = walk[k]
        if tri.slot[walk[(k + 1) % m]] < tri.slot[tri.twin[d]]:
            gaps += 1
        if not tri.is_canonical(d):
            backwards += 1
    return gaps - backwards


@dataclass(frozen=True)
class Framing:
    """A framing given by its signature and its values on the stored basis."""

    surface: SurfaceType
    signature: Tuple[int, ...]
    gsb_values: Tuple[int, ...]
    correction: Tuple[int, ...] = field(compare=False, repr=False)

    @property
    def tri(self) -> Triangulation:
        return triangulation_of(self.surface)

    @property
    def genus(self) -> int:
        return self.surface.genus

    def value_pairs(self) -> List[Tuple[int, int]]:
        return [(self.gsb_values[2 * i], self.gsb_values[2 * i + 1]) for i in range(self.genus)]

    def to_dict(self) -> Dict:
        return {"signature": list(self.signature), "gsb_values": list(self.gsb_values)}

    @classmethod
    def from_dict(cls, data: Dict) -> "Framing":
        try:
            signature = [int(v) for v in data["signature"]]
            values = [int(v) for v in data["gsb_values"]]
        except (KeyError, TypeError, ValueError) as e:
            raise FramingError(f"malformed framing record: {e}") from e
        if len(values) % 2:
            raise FramingError("gsb_values must hold an (a_i, b_i) pair per handle")
        try:
            tri = canonical_triangulation(len(values) // 2, len(signature))
        except SurfaceError as e:
            raise FramingError(str(e)) from e
        return framing_from_gsb(tri, values, signature)


def framing_from_gsb(
    tri: Triangulation,
    values: Sequence[int],
    signature: Sequence[int],
    arf: Optional[int] = None,
    arf1: Optional[int] = None,
) -> Framing:
    """The framing taking ``values`` on a_1, b_1, ..., a_g, b_g and ``signature`` on the punctures.

    ``arf`` (spin type, genus at least 2) and ``arf1`` (genus 1) pin the
    invariant the values must produce.
    """
    g, n = tri.genus, tri.punctures
    values = tuple(int(v) for v in values)
    signature = tuple(int(s) for s in signature)
    if len(values) != 2 * g:
        raise FramingError(f"need {2 * g} basis values, got {len(values)}")
    if len(signature) != n:
        raise FramingError(f"need {n} signature entries, got {len(signature)}")
    if sum(signature) != tri.surface.euler:
        raise FramingError(f"signature sums to {sum(signature)}, expected euler characteristic {tri.surface.euler}")
    if g == 1 and arf1 is not None:
        found = gcd(values[0], values[1], *(s + 1 for s in signature))
        if found != arf1:
            raise FramingError(f"values give Arf_1 = {found}, requested {arf1}")
    if g >= 2 and arf is not None and all(s % 2 for s in signature):
        found = arf_of(values)
        if found != arf % 2:
            raise FramingError(f"values give Arf = {found}, requested {arf}")

    # one unknown per edge off the spanning tree, one equation per basis curve
    rose, basis = homology_frame(tri)
    targets = list(values) + list(signature[: n - 1])
    walks = list(tri.gsb) + [tri.faces[p] for p in range(n - 1)]
    rhs = [t - reference_turning(tri, w) for t, w in zip(targets, walks)]
    correction = [0] * tri.n_edges
    if basis:
        try:
            solution = solve_integral(basis, rhs)
        except FramedCurvesError as e:
            raise FramingError(f"correction class could not be solved: {e}") from e
        for e, x in zip(rose, solution):
            correction[e] = x
    logger.debug("framing built: values=%s signature=%s", values, signature)
    return Framing(tri.surface, signature, values, tuple(correction))


def arf_of(values: Sequence[int]) -> int:
    return sum((values[2 * i] + 1) * (values[2 * i + 1] + 1) for i in range(len(values) // 2)) % 2


def winding_of_walk(phi: Framing, walk: Sequence[int]) -> int:
    tri = phi.tri
    word = reduce_walk(tri, walk)
    if not word:
        raise FramingError("nullhomotopic curves have no winding number")
    total = reference_turning(tri, word)
    for d in word:
        x = phi.correction[tri.edge_of[d]]
        total += x if tri.is_canonical(d) else -x
    return total


def winding_number(phi: Framing, c: OrientedCurve) -> int:
    if c.surface != phi.surface:
        raise SurfaceError(f"curve on {c.surface}, framing on {phi.surface}")
    return winding_of_walk(phi, c.word)


def unoriented_winding(phi: Framing, c: NormalMulticurve) -> int:
    """|phi(c)|, which does not depend on orientation."""
    return abs(winding_of_walk(phi, c.require_single()))


@dataclass(frozen=True)
class FramingInvariants:
    surface: SurfaceType
    signature: Tuple[int, ...]
    spin_type: bool
    holomorphic_type: bool
    arf: Optional[int] = None
    arf1: Optional[int] = None
    arf1_bound: Optional[int] = None

    def to_dict(self) -> Dict:
        return {
            "surface": self.surface.as_dict(),
            "signature": list(self.signature),
            "spin_type": self.spin_type,
            "holomorphic_type": self.holomorphic_type,
            "arf": self.arf,
            "arf1": self.arf1,
            "arf1_bound": self.arf1_bound,
        }


def is_spin_type(genus: int, circles: Sequence[int]) -> bool:
    return genus >= 2 and all(v % 2 for v in circles)


def arf1_by_enumeration(phi: Framing, start_bound: int = 4, max_bound: int = 16) -> Tuple[int, int]:
    """gcd of phi over basis and enumerated nonseparating curves, with the puncture terms.

    The bound doubles until the gcd has not moved across two doublings (or
    the ceiling is reached); returns the value and the bound it settled at.
    """
    tri = phi.tri
    value = gcd(*phi.gsb_values, *(s + 1 for s in phi.signature))
    bound = max(1, start_bound)
    unchanged = 0
    while True:
        before = value
        for word in single_curves(tri, bound):
            if value == 1:
                break
            if not topological_type(multicurve_of(tri, [word])).separating:
                value = gcd(value, winding_of_walk(phi, word))
        unchanged = unchanged + 1 if value == before else 0
        if unchanged >= 2 or value == 1 or bound >= max_bound:
            return value, bound
        bound = min(2 * bound, max_bound)


def invariants(phi: Framing, arf1_sample_bound: Optional[int] = None) -> FramingInvariants:
    """Signature, type flags, and Arf or Arf_1 where they are defined."""
    g = phi.genus
    signature = phi.signature
    spin = is_spin_type(g, signature)
    holomorphic = all(s < 0 for s in signature)
    arf = arf_of(phi.gsb_values) if spin else None
    arf1 = None
    bound = None
    if g == 1:
        arf1 = gcd(phi.gsb_values[0], phi.gsb_values[1], *(s + 1 for s in signature))
        if arf1_sample_bound:
            sampled, bound = arf1_by_enumeration(phi, max_bound=arf1_sample_bound)
            if sampled != arf1:
                raise FramingError(f"enumerated Arf_1 {sampled} disagrees with basis value {arf1}")
    return FramingInvariants(phi.surface, signature, spin, holomorphic, arf, arf1, bound)


def same_orbit(f: FramingInvariants, other: FramingInvariants) -> bool:
    """Whether two framings with these invariants lie in one mapping class group orbit."""
    if f.surface != other.surface:
        raise SurfaceError(f"invariants of {f.surface} and {other.surface} cannot be compared")
    if f.signature != other.signature:
        return False
    g = f.surface.genus
    if g == 1:
        return f.arf1 == other.arf1
    if g >= 2 and f.spin_type:
        return f.arf == other.arf
    return True


@dataclass(frozen=True)
class ComponentFraming:
    component: ComponentData
    boundary_windings: Tuple[int, ...]
    puncture_windings: Tuple[int, ...]
    genus: int
    arf_data: Optional[Dict[str, int]] = field(default=None, compare=False)
    basis: Tuple[Tuple[Walk, Walk], ...] = field(default=(), compare=False, repr=False)

    @property
    def windings(self) -> Tuple[int, ...]:
        return self.boundary_windings + self.puncture_windings

    @property
    def coherent(self) -> bool:
        return sum(self.windings) == self.component.euler


def boundary_winding(phi: Framing, gamma: NormalMulticurve, curve: int, side: str) -> int:
    """Winding of a cut curve oriented with the given side on its left."""
    value = winding_of_walk(phi, gamma.components[curve])
    return value if side == LEFT else -value


def restrict(
    phi: Framing,
    gamma: NormalMulticurve,
    component: int,
    with_arf: bool = True,
    start_bound: int = 4,
    max_bound: int = 24,
) -> ComponentFraming:
    """The framing seen from one piece of the cut along ``gamma``."""
    if gamma.surface != phi.surface:
        raise SurfaceError("multicurve and framing live on different surfaces")
    decomposition = cut(gamma)
    data = decomposition.component(component)
    boundary = tuple(boundary_winding(phi, gamma, c, side) for c, side in data.boundary)
    punctures = tuple(phi.signature[p] for p in data.punctures)
    if sum(boundary) + sum(punctures) != data.euler:
        raise FramingError(
            f"windings around component {component} sum to {sum(boundary) + sum(punctures)}, "
            f"expected {data.euler}"
        )
    arf_data = None
    basis: Tuple[Tuple[Walk, Walk], ...] = ()
    if with_arf and data.genus > 0:
        try:
            pairs = component_gsb(gamma, component, start_bound, max_bound)
        except EnumerationBoundError:
            logger.error("no basis found inside component %d of %s", component, gamma.weights)
            raise
        values = []
        for x, y in pairs:
            values.extend((winding_of_walk(phi, x.components[0]), winding_of_walk(phi, y.components[0])))
        basis = tuple((x.components[0], y.components[0]) for x, y in pairs)
        circles = boundary + punctures
        if data.genus == 1:
            arf_data = {"arf1": gcd(values[0], values[1], *(v + 1 for v in circles))}
        elif is_spin_type(data.genus, circles):
            arf_data = {"arf": arf_of(values)}
    return ComponentFraming(data, boundary, punctures, data.genus, arf_data, basis)


def pushforward_values(phi: Framing, word: MappingClassWord) -> Tuple[int, ...]:
    """Values of phi on the image of the stored basis under ``word``.

    Computed in homology with twist-linearity, without drawing any twisted
    curve.
    """
    tri = phi.tri
    g = tri.genus
    letters = []
    for curve, power in word.letters:
        oriented = OrientedCurve(tri.surface, rotate_min(curve))
        letters.append((homology_class(oriented), winding_of_walk(phi, curve), power))
    results = []
    for k, walk in enumerate(tri.gsb):
        h = list(homology_class(OrientedCurve(tri.surface, rotate_min(walk))))
        value = phi.gsb_values[k]
        for about, about_value, power in letters:
            pairing = symplectic_pairing(h, about, g)
            if pairing:
                value += power * pairing * about_value
                h = [x + power * pairing * y for x, y in zip(h, about)]
        results.append(value)
    return tuple(results)


def direct_image_values(phi: Framing, word: MappingClassWord) -> Tuple[int, ...]:
    """Values of phi on the image of the stored basis, by twisting the curves themselves."""
    tri = phi.tri
    return tuple(
        winding_number(phi, word.apply_oriented(OrientedCurve(tri.surface, rotate_min(w)))) for w in tri.gsb
    )


def reproduces_values(phi: Framing) -> bool:
    """Whether the framing takes its own defining values."""
    tri = phi.tri
    if any(winding_of_walk(phi, w) != v for w, v in zip(tri.gsb, phi.gsb_values)):
        return False
    return all(winding_of_walk(phi, tri.faces[p]) == s for p, s in enumerate(phi.signature))


__all__ = [
    "Framing",
    "FramingInvariants",
    "ComponentFraming",
    "framing_from_gsb",
    "winding_number",
    "invariants",
    "same_orbit",
    "restrict",
    "pushforward_values",
]
