"""Curves, arcs and multicurves on the canonical triangulated surface S_{g,n}.

Every object here lives on ``canonical_triangulation(g, n)`` and is identified
by its normal coordinates, so two multicurves are equal exactly when they are
isotopic.  Components are also kept as reduced cyclic dart words, which is
what the intersection, twist and cutting code works with.
"""
import logging
import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from framedcurves.errors import CurveError, EnumerationBoundError, SurfaceError
from framedcurves.resources.arrangement import ArcPiece, Arrangement
from framedcurves.resources.crossings import (
    algebraic_intersection_walks,
    intersection_walks,
    is_simple,
    twist_walk,
)
from framedcurves.resources.drawing import LEFT, RIGHT, Drawing
from framedcurves.resources.linalg import mod2_rank, solve_integral, transpose
from framedcurves.resources.triangulation import (
    SurfaceType,
    Triangulation,
    Walk,
    canonical_triangulation,
)
from framedcurves.resources.walks import (
    add_weights,
    edge_weights,
    face_keys,
    inverse,
    is_closed_walk,
    is_primitive,
    peripheral_puncture,
    reduce_walk,
    rotate_min,
    signed_counts,
    trace_weights,
    unoriented_key,
)
from framedcurves.telemetry.setup_telemetry import traceFunction

logger = logging.getLogger(__name__)

__all__ = [
    "SurfaceType",
    "Triangulation",
    "canonical_triangulation",
    "NormalMulticurve",
    "OrientedCurve",
    "NormalArcSystem",
    "ComponentData",
    "ComplementDecomposition",
    "MappingClassWord",
    "TopologicalType",
    "ArcPattern",
    "geometric_intersection",
    "algebraic_intersection",
    "twist",
    "cut",
    "topological_type",
    "neighborhood_boundary",
    "enumerate_multicurves",
    "EDGE_BOUND",
    "TOTAL_BOUND",
    "arc_pattern",
]

DISJOINT = "disjoint"
CONTAINED = "contained"
SINGLE_ARC = "single_arc_same_boundary"
PARALLEL_PAIR = "parallel_pair_distinct_boundaries"
OTHER = "other"

EDGE_BOUND = "edge"
TOTAL_BOUND = "total"


def triangulation_of(surface: SurfaceType) -> Triangulation:
    return canonical_triangulation(surface.genus, surface.punctures)


def _check_same_surface(*surfaces: SurfaceType) -> SurfaceType:
    first = surfaces[0]
    for other in surfaces[1:]:
        if other != first:
            raise SurfaceError(f"objects live on different surfaces: {first} and {other}")
    return first


@dataclass(frozen=True)
class NormalMulticurve:
    """Isotopy class of a multicurve, keyed by its normal coordinates."""

    surface: SurfaceType
    weights: Tuple[int, ...]
    components: Tuple[Walk, ...] = field(compare=False, repr=False)
    peripheral: bool = field(default=False, compare=False, repr=False)

    @property
    def tri(self) -> Triangulation:
        return triangulation_of(self.surface)

    @property
    def component_count(self) -> int:
        return len(self.components)

    @property
    def total_weight(self) -> int:
        return sum(self.weights)

    def is_empty(self) -> bool:
        return not self.components

    def curve(self, index: int) -> "NormalMulticurve":
        """The single-component multicurve of component ``index``."""
        return multicurve_of(self.tri, [self.components[index]], self.peripheral)

    def curves(self) -> List["NormalMulticurve"]:
        return [self.curve(k) for k in range(len(self.components))]

    def contains(self, other: "NormalMulticurve") -> bool:
        mine = set(self.components)
        return all(c in mine for c in other.components)

    def union(self, other: "NormalMulticurve") -> "NormalMulticurve":
        _check_same_surface(self.surface, other.surface)
        return NormalMulticurve.from_walks(self.tri, self.components + other.components)

    def without(self, other: "NormalMulticurve") -> "NormalMulticurve":
        drop = set(other.components)
        return multicurve_of(self.tri, [c for c in self.components if c not in drop], self.peripheral)

    def require_single(self) -> Walk:
        if len(self.components) != 1:
            raise CurveError(f"expected a single curve, got {len(self.components)} components")
        return self.components[0]

    @classmethod
    def empty(cls, tri: Triangulation) -> "NormalMulticurve":
        return cls(tri.surface, (0,) * tri.n_edges, ())

    @classmethod
    def from_walks(
        cls, tri: Triangulation, walks: Sequence[Sequence[int]], allow_peripheral: bool = False
    ) -> "NormalMulticurve":
        """Validate dart words as pairwise disjoint distinct simple curves."""
        keys: List[Walk] = []
        for walk in walks:
            if not walk or not is_closed_walk(tri, walk):
                raise CurveError(f"not a closed walk: {tuple(walk)}")
            word = reduce_walk(tri, walk)
            if not word:
                raise CurveError("inessential (nullhomotopic) component")
            if not is_primitive(word) or not is_simple(tri, word):
                raise CurveError(f"component is not a simple closed curve: {word}")
            if not allow_peripheral and peripheral_puncture(tri, word) >= 0:
                raise CurveError(f"component is peripheral around puncture {peripheral_puncture(tri, word)}")
            key = unoriented_key(tri, word)
            if key in keys:
                raise CurveError("multicurve has isotopic duplicate components")
            keys.append(key)
        for x, y in combinations(keys, 2):
            if intersection_walks(tri, x, y):
                raise CurveError("components of a multicurve must be disjoint")
        return multicurve_of(tri, keys, allow_peripheral)

    @classmethod
    def from_weights(
        cls, tri: Triangulation, weights: Sequence[int], allow_peripheral: bool = False
    ) -> "NormalMulticurve":
        """Multicurve with the given normal coordinates (matching conditions checked)."""
        strands = trace_weights(tri, weights)
        keys: List[Walk] = []
        for strand in strands:
            key = unoriented_key(tri, strand.walk)
            if key in keys:
                raise CurveError("weights describe parallel copies of a curve")
            if not allow_peripheral and peripheral_puncture(tri, key) >= 0:
                raise CurveError("weights contain a puncture-peripheral component")
            keys.append(key)
        return multicurve_of(tri, keys, allow_peripheral)

    def to_dict(self) -> Dict:
        return {"surface": self.surface.as_dict(), "weights": list(self.weights)}

    @classmethod
    def from_dict(cls, data: Dict, allow_peripheral: bool = False) -> "NormalMulticurve":
        try:
            surface = data["surface"]
            tri = canonical_triangulation(int(surface["g"]), int(surface["n"]))
            weights = [int(w) for w in data["weights"]]
        except (KeyError, TypeError, ValueError) as e:
            raise CurveError(f"malformed multicurve record: {e}") from e
        return cls.from_weights(tri, weights, allow_peripheral)


def multicurve_of(tri: Triangulation, walks: Sequence[Walk], peripheral: bool = False) -> NormalMulticurve:
    """Multicurve from words already known to be disjoint distinct simple curves."""
    keys = sorted({unoriented_key(tri, w) for w in walks}, key=lambda w: (len(w), w))
    if keys:
        weights = add_weights(*(edge_weights(tri, k) for k in keys))
    else:
        weights = (0,) * tri.n_edges
    return NormalMulticurve(tri.surface, weights, tuple(keys), peripheral)


@dataclass(frozen=True)
class OrientedCurve:
    """A simple closed curve with a direction, stored as its least rotation."""

    surface: SurfaceType
    word: Walk

    @property
    def tri(self) -> Triangulation:
        return triangulation_of(self.surface)

    @classmethod
    def from_walk(cls, tri: Triangulation, walk: Sequence[int]) -> "OrientedCurve":
        if not walk or not is_closed_walk(tri, walk):
            raise CurveError(f"not a closed walk: {tuple(walk)}")
        word = reduce_walk(tri, walk)
        if not word:
            raise CurveError("nullhomotopic curve has no orientation class")
        return cls(tri.surface, rotate_min(word))

    def reverse(self) -> "OrientedCurve":
        return OrientedCurve(self.surface, rotate_min(inverse(self.tri, self.word)))

    @property
    def underlying(self) -> NormalMulticurve:
        return multicurve_of(self.tri, [self.word], self.peripheral)

    @property
    def peripheral(self) -> bool:
        return peripheral_puncture(self.tri, self.word) >= 0

    def __len__(self) -> int:
        return len(self.word)


def orient(curve: NormalMulticurve, reverse: bool = False) -> OrientedCurve:
    """The single curve with its stored orientation (or the opposite one)."""
    oriented = OrientedCurve(curve.surface, rotate_min(curve.require_single()))
    return oriented.reverse() if reverse else oriented


def puncture_loop(tri: Triangulation, puncture: int) -> OrientedCurve:
    """Peripheral loop around ``puncture`` with the surface on its left."""
    if not 0 <= puncture < tri.punctures:
        raise SurfaceError(f"no puncture {puncture} on {tri.surface}")
    return OrientedCurve(tri.surface, rotate_min(tri.faces[puncture]))


def gsb_curves(tri: Triangulation) -> List[OrientedCurve]:
    """Stored basis a_1, b_1, ..., a_g, b_g with <a_i, b_i> = +1."""
    return [OrientedCurve(tri.surface, rotate_min(w)) for w in tri.gsb]


@dataclass(frozen=True)
class NormalArcSystem:
    """Disjoint arcs whose endpoints sit on a set of host curves."""

    surface: SurfaceType
    hosts: Tuple[Walk, ...]
    arcs: Tuple[ArcPiece, ...]

    @property
    def weights(self) -> Tuple[int, ...]:
        tri = triangulation_of(self.surface)
        if not self.arcs:
            return (0,) * tri.n_edges
        return add_weights(*(edge_weights(tri, a.word) for a in self.arcs))


@dataclass(frozen=True)
class ComponentData:
    index: int
    genus: int
    euler: int
    boundary: Tuple[Tuple[int, str], ...]
    punctures: Tuple[int, ...]

    @property
    def circles(self) -> int:
        return len(self.boundary) + len(self.punctures)

    @property
    def xi(self) -> int:
        return 3 * self.genus - 3 + self.circles

    def as_dict(self) -> Dict:
        return {
            "index": self.index,
            "genus": self.genus,
            "euler": self.euler,
            "boundary": [[c, side] for c, side in self.boundary],
            "punctures": list(self.punctures),
        }


@dataclass(frozen=True)
class ComplementDecomposition:
    multicurve: NormalMulticurve
    components: Tuple[ComponentData, ...]
    curve_sides: Tuple[Tuple[int, int], ...]
    dual_graph: nx.MultiGraph = field(compare=False, repr=False)
    drawing: Drawing = field(compare=False, repr=False)

    def component(self, index: int) -> ComponentData:
        if not 0 <= index < len(self.components):
            raise CurveError(f"no component {index} in a cut with {len(self.components)} components")
        return self.components[index]

    @property
    def euler_total(self) -> int:
        return sum(c.euler for c in self.components)

    def component_of(self, curve: NormalMulticurve) -> Optional[int]:
        """Component holding a curve disjoint from the cut, None for a cut curve."""
        return self.drawing.component_of_walk(curve.require_single())

    def summary(self) -> List[Dict]:
        return [c.as_dict() for c in self.components]


@lru_cache(maxsize=4096)
def drawing_of(tri: Triangulation, curves: Tuple[Walk, ...]) -> Drawing:
    return Drawing(tri, curves)


@dataclass(frozen=True)
class TopologicalType:
    separating: bool
    homology_class_mod2: Tuple[int, ...]
    peripheral: bool = False


@dataclass(frozen=True)
class ArcPattern:
    kind: str
    arcs: int = 0
    endpoints: Tuple[Tuple[Tuple[int, str], Tuple[int, str]], ...] = ()

    def is_allowed(self) -> bool:
        return self.kind != OTHER


@dataclass(frozen=True)
class ArcInComponent:
    """A sub-arc of a curve between two consecutive crossings with the cut curves."""

    word: Walk
    start_curve: int
    start_side: str
    end_curve: int
    end_side: str
    start_slot: Tuple[int, int]
    end_slot: Tuple[int, int]
    component: int


def geometric_intersection(c: NormalMulticurve, d: NormalMulticurve) -> int:
    _check_same_surface(c.surface, d.surface)
    tri = c.tri
    return sum(intersection_walks(tri, x, y) for x in c.components for y in d.components)


def algebraic_intersection(c: OrientedCurve, d: OrientedCurve) -> int:
    _check_same_surface(c.surface, d.surface)
    return algebraic_intersection_walks(c.tri, c.word, d.word)


def twist_oriented(target: OrientedCurve, about: NormalMulticurve, power: int) -> OrientedCurve:
    _check_same_surface(target.surface, about.surface)
    loop = about.require_single()
    word = twist_walk(target.tri, target.word, loop, power)
    return OrientedCurve(target.surface, rotate_min(word))


def twist(target: NormalMulticurve, about: NormalMulticurve, power: int) -> NormalMulticurve:
    """Image of ``target`` under the ``power``-th Dehn twist about a single curve."""
    _check_same_surface(target.surface, about.surface)
    loop = about.require_single()
    if power == 0:
        return target
    tri = target.tri
    walks = [twist_walk(tri, w, loop, power) for w in target.components]
    return multicurve_of(tri, walks, target.peripheral)


def cut(gamma: NormalMulticurve) -> ComplementDecomposition:
    """Components of the surface cut along the multicurve."""
    tri = gamma.tri
    drawing = drawing_of(tri, gamma.components)
    components = tuple(
        ComponentData(
            index=info.index,
            genus=info.genus,
            euler=info.euler,
            boundary=tuple(info.boundary),
            punctures=tuple(info.punctures),
        )
        for info in drawing.components
    )
    decomposition = ComplementDecomposition(
        multicurve=gamma,
        components=components,
        curve_sides=tuple(drawing.curve_sides),
        dual_graph=drawing.dual_graph(),
        drawing=drawing,
    )
    if decomposition.euler_total != tri.surface.euler:
        raise CurveError(f"cut pieces have total euler {decomposition.euler_total}, expected {tri.surface.euler}")
    return decomposition


@lru_cache(maxsize=None)
def homology_frame(tri: Triangulation) -> Tuple[Tuple[int, ...], Tuple[Tuple[int, ...], ...]]:
    rose = tuple(e for e in range(tri.n_edges) if e not in tri.tree_edges)
    basis = [signed_counts(tri, w, rose) for w in tri.gsb]
    basis += [signed_counts(tri, tri.faces[p], rose) for p in range(tri.punctures - 1)]
    return rose, tuple(tuple(row) for row in basis)


def homology_class(c: OrientedCurve) -> Tuple[int, ...]:
    """Integral coordinates in the basis a_1, b_1, ..., a_g, b_g, Delta_1, ..., Delta_{n-1}."""
    tri = c.tri
    rose, basis = homology_frame(tri)
    if not basis:
        return ()
    vector = signed_counts(tri, c.word, rose)
    return tuple(solve_integral(transpose(basis), vector))


def symplectic_pairing(x: Sequence[int], y: Sequence[int], genus: int) -> int:
    """Intersection pairing of two homology coordinate vectors; punctures pair trivially."""
    return sum(x[2 * i] * y[2 * i + 1] - x[2 * i + 1] * y[2 * i] for i in range(genus))


def topological_type(c: NormalMulticurve) -> TopologicalType:
    word = c.require_single()
    tri = c.tri
    mod2 = tuple(v % 2 for v in homology_class(OrientedCurve(c.surface, rotate_min(word))))
    if peripheral_puncture(tri, word) >= 0:
        return TopologicalType(separating=True, homology_class_mod2=mod2, peripheral=True)
    separating = len(cut(c).components) == 2
    return TopologicalType(separating=separating, homology_class_mod2=mod2)


def homology_rank_mod2(curves: Sequence[OrientedCurve]) -> int:
    """Rank over GF(2) of the homology classes of ``curves``."""
    return mod2_rank([homology_class(c) for c in curves])


def is_genus_separating(c: NormalMulticurve) -> bool:
    """Separating, with positive genus on both sides."""
    if c.component_count != 1 or peripheral_puncture(c.tri, c.components[0]) >= 0:
        return False
    pieces = cut(c).components
    return len(pieces) == 2 and all(p.genus > 0 for p in pieces)


def neighborhood_boundary(
    curves: Sequence[Walk], arcs: Optional[NormalArcSystem] = None, tri: Optional[Triangulation] = None
) -> Tuple[NormalMulticurve, List[Walk]]:
    """Boundary of a regular neighborhood of a connected union of curves and arcs.

    Returns the essential nonperipheral boundary curves (parallel copies
    merged) and, separately, the discarded inessential or peripheral words.
    """
    if tri is None:
        if arcs is None:
            raise CurveError("need a triangulation or an arc system")
        tri = triangulation_of(arcs.surface)
    pieces = tuple(tuple(c) for c in curves)
    arrangement = Arrangement(tri, pieces, arcs.arcs if arcs else ())
    kept: List[Walk] = []
    discarded: List[Walk] = []
    periph = face_keys(tri)
    for word in arrangement.boundary_words():
        if not word:
            discarded.append(word)
            continue
        key = unoriented_key(tri, word)
        if key in periph:
            discarded.append(word)
        elif key not in kept:
            kept.append(key)
    logger.debug("neighborhood boundary: kept %d, discarded %d", len(kept), len(discarded))
    return multicurve_of(tri, kept), discarded


@lru_cache(maxsize=64)
@traceFunction({"bound": "bound"})
def _single_curves(tri: Triangulation, bound: int) -> Tuple[Walk, ...]:
    if bound <= 0:
        return ()
    return tuple(drawing_of(tri, ()).simple_curves(0, bound))


def single_curves(tri: Triangulation, bound: int) -> Tuple[Walk, ...]:
    """Essential nonperipheral simple curves of total weight at most ``bound``."""
    return _single_curves(tri, bound=bound)


def enumerate_multicurves(
    tri: Triangulation,
    weight_bound: int,
    predicate: Optional[Callable[[NormalMulticurve], bool]] = None,
    single_component: bool = False,
    max_components: Optional[int] = None,
    bound_mode: str = EDGE_BOUND,
) -> Iterator[NormalMulticurve]:
    """Every nonempty multicurve within ``weight_bound``, once each.

    With ``bound_mode="edge"`` every normal coordinate is at most the bound;
    with ``"total"`` their sum is.  Order is deterministic: by the sorted
    position of the components in the list of single curves.
    """
    if bound_mode not in (EDGE_BOUND, TOTAL_BOUND):
        raise CurveError(f"unknown bound mode {bound_mode!r}")
    if weight_bound <= 0:
        return
    per_edge = bound_mode == EDGE_BOUND
    if per_edge:
        # a curve with every coordinate at most b has total weight at most b * edges
        pool = single_curves(tri, weight_bound * tri.n_edges)
        curves = [c for c in pool if max(edge_weights(tri, c)) <= weight_bound]
    else:
        curves = list(single_curves(tri, weight_bound))
    limit = 1 if single_component else (max_components or tri.surface.complexity)
    vectors = [edge_weights(tri, c) for c in curves]
    disjoint: Dict[Tuple[int, int], bool] = {}

    def compatible(chosen: List[int], k: int) -> bool:
        for j in chosen:
            if (j, k) not in disjoint:
                disjoint[(j, k)] = intersection_walks(tri, curves[j], curves[k]) == 0
            if not disjoint[(j, k)]:
                return False
        return True

    def fits(used: Tuple[int, ...], k: int) -> bool:
        if per_edge:
            return all(u + w <= weight_bound for u, w in zip(used, vectors[k]))
        return sum(used) + sum(vectors[k]) <= weight_bound

    def extend(chosen: List[int], used: Tuple[int, ...], start: int) -> Iterator[NormalMulticurve]:
        for k in range(start, len(curves)):
            if not fits(used, k) or not compatible(chosen, k):
                continue
            chosen.append(k)
            multicurve = multicurve_of(tri, [curves[j] for j in chosen])
            if predicate is None or predicate(multicurve):
                yield multicurve
            if len(chosen) < limit:
                yield from extend(chosen, add_weights(used, vectors[k]), k + 1)
            chosen.pop()

    yield from extend([], (0,) * tri.n_edges, 0)


def curves_in_component(gamma: NormalMulticurve, component: int, bound: int) -> List[NormalMulticurve]:
    """Curves inside one piece of the cut, not parallel to its boundary."""
    decomposition = cut(gamma)
    decomposition.component(component)
    words = decomposition.drawing.simple_curves(component, bound)
    return [multicurve_of(gamma.tri, [w]) for w in words]


def _side_after(sign: int) -> str:
    # a crossing of positive sign leaves the first curve on the right of the second
    return RIGHT if sign > 0 else LEFT


def _opposite(side: str) -> str:
    return LEFT if side == RIGHT else RIGHT


def arcs_of(c: NormalMulticurve, gamma: NormalMulticurve) -> Tuple[Arrangement, List[ArcInComponent]]:
    """Sub-arcs of ``c`` cut out by ``gamma``, each tagged with its piece of the cut."""
    word = c.require_single()
    tri = c.tri
    decomposition = cut(gamma)
    arrangement = Arrangement(tri, (word,) + gamma.components)
    order = arrangement.order[0]
    marks = []
    for pid in order:
        point = arrangement.points[pid]
        other = point.curves[1] - 1
        marks.append((other, _side_after(point.sign), pid))
    arcs: List[ArcInComponent] = []
    count = len(marks)
    for t in range(count):
        curve, side, pid = marks[t]
        end_curve, end_after, end_pid = marks[(t + 1) % count]
        left, right = decomposition.curve_sides[curve]
        arcs.append(
            ArcInComponent(
                word=arrangement.subarc(0, t),
                start_curve=curve,
                start_side=side,
                end_curve=end_curve,
                end_side=_opposite(end_after),
                start_slot=(curve + 1, arrangement.slot[(curve + 1, pid)]),
                end_slot=(end_curve + 1, arrangement.slot[(end_curve + 1, end_pid)]),
                component=left if side == LEFT else right,
            )
        )
    return arrangement, arcs


def _bounds_disk(tri: Triangulation, parts: Sequence[Walk]) -> bool:
    word: List[int] = []
    for part in parts:
        word.extend(part)
    return not reduce_walk(tri, word)


def _parallel(tri: Triangulation, arrangement: Arrangement, first: ArcInComponent, second: ArcInComponent) -> bool:
    if (second.start_curve, second.start_side) != (first.start_curve, first.start_side):
        second = ArcInComponent(
            word=inverse(tri, second.word),
            start_curve=second.end_curve,
            start_side=second.end_side,
            end_curve=second.start_curve,
            end_side=second.start_side,
            start_slot=second.end_slot,
            end_slot=second.start_slot,
            component=second.component,
        )
    x1, s1 = first.start_slot
    _, s2 = second.start_slot
    x2, t1 = first.end_slot
    _, t2 = second.end_slot
    for forward_far in (True, False):
        for far in arrangement.path_along(x2, t1, t2, forward_far):
            for forward_near in (True, False):
                for near in arrangement.path_along(x1, s2, s1, forward_near):
                    if _bounds_disk(tri, (first.word, far, inverse(tri, second.word), near)):
                        return True
    return False


def arc_pattern(c: NormalMulticurve, gamma: NormalMulticurve, component: int) -> ArcPattern:
    """How a curve meets one piece of the cut along ``gamma``."""
    decomposition = cut(gamma)
    decomposition.component(component)
    word = c.require_single()
    tri = c.tri
    if unoriented_key(tri, word) in gamma.components:
        return ArcPattern(DISJOINT)
    if geometric_intersection(c, gamma) == 0:
        where = decomposition.drawing.component_of_walk(word)
        return ArcPattern(CONTAINED if where == component else DISJOINT)
    arrangement, arcs = arcs_of(c, gamma)
    inside = [a for a in arcs if a.component == component]
    endpoints = tuple(((a.start_curve, a.start_side), (a.end_curve, a.end_side)) for a in inside)
    if not inside:
        return ArcPattern(DISJOINT)
    if len(inside) == 1 and endpoints[0][0] == endpoints[0][1]:
        return ArcPattern(SINGLE_ARC, 1, endpoints)
    if len(inside) == 2:
        ends = [frozenset(e) for e in endpoints]
        if ends[0] == ends[1] and len(ends[0]) == 2 and _parallel(tri, arrangement, inside[0], inside[1]):
            return ArcPattern(PARALLEL_PAIR, 2, endpoints)
    return ArcPattern(OTHER, len(inside), endpoints)


@dataclass(frozen=True)
class MappingClassWord:
    """Product of Dehn twists, applied left to right."""

    surface: SurfaceType
    letters: Tuple[Tuple[Walk, int], ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def apply(self, target: NormalMulticurve) -> NormalMulticurve:
        _check_same_surface(self.surface, target.surface)
        tri = target.tri
        for curve, power in self.letters:
            target = twist(target, multicurve_of(tri, [curve]), power)
        return target

    def apply_oriented(self, target: OrientedCurve) -> OrientedCurve:
        _check_same_surface(self.surface, target.surface)
        tri = target.tri
        for curve, power in self.letters:
            target = twist_oriented(target, multicurve_of(tri, [curve]), power)
        return target

    def inverse(self) -> "MappingClassWord":
        return MappingClassWord(self.surface, tuple((c, -p) for c, p in reversed(self.letters)))

    def to_dict(self) -> Dict:
        return {
            "surface": self.surface.as_dict(),
            "letters": [{"curve": list(c), "power": p} for c, p in self.letters],
        }

    @classmethod
    def random(
        cls,
        tri: Triangulation,
        rng: random.Random,
        length: int,
        pool: Optional[Sequence[Walk]] = None,
        max_power: int = 2,
    ) -> "MappingClassWord":
        """Seeded random word in twists about curves of ``pool``."""
        if pool is None:
            pool = [unoriented_key(tri, w) for w in tri.gsb]
        if not pool:
            return cls(tri.surface)
        letters = []
        for _ in range(length):
            curve = pool[rng.randrange(len(pool))]
            power = rng.choice([p for p in range(-max_power, max_power + 1) if p])
            letters.append((tuple(curve), power))
        return cls(tri.surface, tuple(letters))


def search_in_component(
    gamma: NormalMulticurve,
    component: int,
    predicate: Callable[[NormalMulticurve], bool],
    start_bound: int,
    max_bound: int,
) -> Tuple[Optional[NormalMulticurve], int]:
    """First curve of the piece passing ``predicate``, doubling the bound as needed.

    Returns the curve (or None) and the last bound searched.
    """
    bound = max(1, start_bound)
    tried = set()
    while True:
        for curve in curves_in_component(gamma, component, bound):
            if curve.components in tried:
                continue
            tried.add(curve.components)
            if predicate(curve):
                return curve, bound
        if bound >= max_bound:
            return None, bound
        bound = min(2 * bound, max_bound)


def is_nonseparating_in(gamma: NormalMulticurve, curve: NormalMulticurve) -> bool:
    """Whether a curve disjoint from ``gamma`` leaves its piece of the cut connected."""
    return len(cut(gamma.union(curve)).components) == len(cut(gamma).components)


def dual_curve(gamma: NormalMulticurve, x: NormalMulticurve) -> NormalMulticurve:
    """A curve meeting ``x`` once and otherwise avoiding ``gamma``.

    ``x`` must be nonseparating in its piece of the cut along ``gamma``.
    """
    tri = gamma.tri
    key = x.require_single()
    extended = gamma.union(x)
    drawing = drawing_of(tri, extended.components)
    j = extended.components.index(key)
    left, right = drawing.side_pieces(j, 0)
    path = drawing.path_darts(right, left)
    if not path:
        raise CurveError("curve separates its piece of the cut; no dual curve")
    y = multicurve_of(tri, [reduce_walk(tri, path)])
    if geometric_intersection(x, y) != 1:
        raise CurveError("dual curve construction did not meet the curve once")
    return y


def component_gsb(
    gamma: NormalMulticurve, component: int, start_bound: int = 4, max_bound: int = 24
) -> List[Tuple[NormalMulticurve, NormalMulticurve]]:
    """Geometric symplectic basis of one piece of the cut, built pair by pair.

    Each round finds a curve nonseparating in what is left of the piece, a
    dual curve for it, and cuts the resulting one-holed torus away.
    """
    decomposition = cut(gamma)
    genus = decomposition.component(component).genus
    tri = gamma.tri
    if gamma.is_empty() and genus == tri.genus:
        return [(multicurve_of(tri, [tri.gsb[2 * i]]), multicurve_of(tri, [tri.gsb[2 * i + 1]])) for i in range(genus)]
    pairs: List[Tuple[NormalMulticurve, NormalMulticurve]] = []
    current, piece = gamma, component
    for _ in range(genus):
        base = current
        x, bound = search_in_component(
            base, piece, lambda c: is_nonseparating_in(base, c), start_bound, max_bound
        )
        if x is None:
            raise EnumerationBoundError("no nonseparating curve found inside the piece", bound)
        y = dual_curve(base, x)
        pairs.append((x, y))
        if len(pairs) == genus:
            break
        torus_boundary, _ = neighborhood_boundary([x.components[0], y.components[0]], tri=tri)
        t = torus_boundary.curve(0)
        if not base.contains(t):
            current = base.union(t)
        cut_now = cut(current)
        j = current.components.index(t.components[0])
        left, right = cut_now.curve_sides[j]
        torus_side = cut_now.drawing.component_of_walk(x.components[0])
        piece = right if left == torus_side else left
    if homology_rank_mod2([orient(c) for pair in pairs for c in pair]) != 2 * genus:
        raise CurveError(f"basis found inside component {component} is not independent mod 2")
    return pairs


def boundary_curves(gamma: NormalMulticurve, component: int) -> NormalMulticurve:
    """The curves of ``gamma`` that bound the given piece of the cut."""
    data = cut(gamma).component(component)
    return multicurve_of(gamma.tri, [gamma.components[j] for j, _ in data.boundary])


def meets_component(c: NormalMulticurve, gamma: NormalMulticurve, component: int) -> bool:
    """Whether a curve cannot be isotoped off one piece of the cut."""
    rim = boundary_curves(gamma, component)
    if geometric_intersection(c, rim) > 0:
        return True
    word = c.require_single()
    if word in rim.components:
        return False
    return cut(gamma).drawing.component_of_walk(word) == component


def _host_piece(outer: ComplementDecomposition, gamma: NormalMulticurve, inner: Drawing, piece: int) -> int:
    """Piece of the cut along ``gamma`` containing a piece of a finer cut.

    Any one boundary curve of the finer piece locates it: either that curve
    is cut by ``gamma`` and the side says where the piece sits, or it lies
    inside a single piece of the coarser cut.
    """
    info = inner.components[piece]
    if not info.boundary:
        return 0
    j, side = info.boundary[0]
    word = inner.curves[j]
    if word in gamma.components:
        left, right = outer.curve_sides[gamma.components.index(word)]
        return left if side == LEFT else right
    return outer.drawing.component_of_walk(word)


def subsurfaces_overlap(
    first: NormalMulticurve, first_component: int, second: NormalMulticurve, second_component: int
) -> bool:
    """Whether two pieces, cut from two multicurves, share any part of the surface."""
    _check_same_surface(first.surface, second.surface)
    rim1 = boundary_curves(first, first_component)
    rim2 = boundary_curves(second, second_component)
    if geometric_intersection(rim1, rim2) > 0:
        return True
    outer1 = cut(rim1)
    outer2 = cut(rim2)
    piece1 = _component_index_after_trim(first, first_component, rim1)
    piece2 = _component_index_after_trim(second, second_component, rim2)
    tri = first.tri
    both = multicurve_of(tri, rim1.components + rim2.components)
    finer = drawing_of(tri, both.components)
    for idx in range(len(finer.components)):
        if _host_piece(outer1, rim1, finer, idx) == piece1 and _host_piece(outer2, rim2, finer, idx) == piece2:
            return True
    return False


def _component_index_after_trim(gamma: NormalMulticurve, component: int, rim: NormalMulticurve) -> int:
    """Index of a piece of cut(gamma) once only its own boundary curves are cut."""
    data = cut(gamma).component(component)
    trimmed = cut(rim)
    if not data.boundary:
        return 0
    j, side = data.boundary[0]
    left, right = trimmed.curve_sides[rim.components.index(gamma.components[j])]
    return left if side == LEFT else right
