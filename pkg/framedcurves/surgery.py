"""Cut-and-paste constructions of genus-separating curves.

``psi_construct`` produces a genus-separating curve meeting every piece of
a multicurve's complement in one of four tame ways, ``surgery_reduce``
trades a genus-separating curve for a disjoint one meeting a given curve
fewer times, and the anchoring/adjusting helpers run the bounded searches
that tie the two maps together.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import networkx as nx

from framedcurves.errors import CurveError, GraphError, SurgeryError
from framedcurves.framing import Framing
from framedcurves.resources.arrangement import Arrangement, ArcPiece
from framedcurves.resources.crossings import is_simple
from framedcurves.resources.drawing import LEFT, RIGHT
from framedcurves.resources.walks import is_primitive, peripheral_puncture, reduce_walk
from framedcurves.surface_core import (
    NormalArcSystem,
    NormalMulticurve,
    arc_pattern,
    arcs_of,
    component_gsb,
    curves_in_component,
    cut,
    drawing_of,
    geometric_intersection,
    is_genus_separating,
    meets_component,
    multicurve_of,
    neighborhood_boundary,
    single_curves,
)
from framedcurves.telemetry.setup_telemetry import traceFunction
from framedcurves.witness import is_admissible, is_k_vertex

logger = logging.getLogger(__name__)


def _opposite(side: str) -> str:
    return RIGHT if side == LEFT else LEFT


def _as_curve(tri, walk) -> Optional[NormalMulticurve]:
    """The essential nonperipheral simple curve carried by a closed walk, if any."""
    word = reduce_walk(tri, walk)
    if not word or not is_primitive(word) or not is_simple(tri, word):
        return None
    if peripheral_puncture(tri, word) >= 0:
        return None
    return multicurve_of(tri, [word])


def psi_member(phi: Framing, alpha: NormalMulticurve, c: NormalMulticurve) -> bool:
    """Whether ``c`` meets every piece of the cut along ``alpha`` in an allowed pattern."""
    if not is_k_vertex(phi, alpha):
        raise GraphError("multicurve is not a vertex of the model graph")
    if not is_genus_separating(c):
        return False
    for component in cut(alpha).components:
        pattern = arc_pattern(c, alpha, component.index)
        if not pattern.is_allowed():
            logger.debug("pattern %s in piece %d", pattern.kind, component.index)
            return False
    return True


def _torus_boundary(x: NormalMulticurve, y: NormalMulticurve) -> NormalMulticurve:
    tri = x.tri
    boundary, _ = neighborhood_boundary([x.components[0], y.components[0]], tri=tri)
    if boundary.component_count != 1:
        raise SurgeryError(f"neighborhood of a curve pair has {boundary.component_count} essential boundaries")
    return boundary


def _cycle_candidates(graph: nx.MultiGraph) -> Iterator[List[Tuple[int, int, int]]]:
    """Simple cycles of the dual graph as (from, to, curve) steps."""
    for u, v, key in graph.edges(keys=True):
        if u == v:
            yield [(u, u, key)]
    seen = set()
    for u, v, key in graph.edges(keys=True):
        if u == v:
            continue
        for other in graph[u][v]:
            pair = frozenset((key, other))
            if other != key and pair not in seen:
                seen.add(pair)
                yield [(u, v, key), (v, u, other)]
    simple = nx.Graph(graph)
    simple.remove_edges_from(nx.selfloop_edges(simple))
    for cycle in nx.cycle_basis(simple):
        steps = []
        for i, u in enumerate(cycle):
            v = cycle[(i + 1) % len(cycle)]
            steps.append((u, v, min(graph[u][v])))
        yield steps


def _cycle_curve(alpha: NormalMulticurve, steps: List[Tuple[int, int, int]]) -> Optional[NormalMulticurve]:
    """A curve crossing each cut curve of a dual-graph cycle once, and no other."""
    decomposition = cut(alpha)
    drawing = decomposition.drawing
    exits = []
    for u, v, j in steps:
        left, right = decomposition.curve_sides[j]
        if left == right:
            exits.append(LEFT)
        else:
            exits.append(LEFT if left == u else RIGHT)
    word: List[int] = []
    for i, (_, _, j) in enumerate(steps):
        nxt = (i + 1) % len(steps)
        entry = drawing.side_pieces(j, 0)[0 if _opposite(exits[i]) == LEFT else 1]
        leave = drawing.side_pieces(steps[nxt][2], 0)[0 if exits[nxt] == LEFT else 1]
        path = drawing.path_darts(entry, leave)
        if path is None:
            return None
        word.extend(path)
    if not word:
        return None
    return _as_curve(alpha.tri, word)


@traceFunction
def psi_construct(phi: Framing, alpha: NormalMulticurve, max_bound: int = 24) -> NormalMulticurve:
    """A genus-separating curve that passes ``psi_member`` for ``alpha``."""
    if not is_k_vertex(phi, alpha):
        raise GraphError("multicurve is not a vertex of the model graph")
    decomposition = cut(alpha)
    for component in decomposition.components:
        if component.genus > 0:
            x, y = component_gsb(alpha, component.index, max_bound=max_bound)[0]
            c = _torus_boundary(x, y)
            if is_genus_separating(c):
                logger.info("piece %d has genus; cutting off a handle", component.index)
                return c
    candidates = 0
    for steps in _cycle_candidates(decomposition.dual_graph):
        candidates += 1
        b = _cycle_curve(alpha, steps)
        if b is None:
            continue
        last = multicurve_of(alpha.tri, [alpha.components[steps[-1][2]]])
        if geometric_intersection(b, last) != 1:
            continue
        c = _torus_boundary(b, last)
        if is_genus_separating(c) and psi_member(phi, alpha, c):
            logger.info("dual-graph cycle of length %d gives weight %d", len(steps), c.total_weight)
            return c
    raise SurgeryError(f"none of {candidates} dual-graph cycles produced a tame genus-separating curve")


@dataclass(frozen=True)
class SurgeryStep:
    before: NormalMulticurve
    after: NormalMulticurve
    case: str
    intersections: Tuple[int, int]


def _pants_curves(arrangement: Arrangement, c: NormalMulticurve, arc) -> List[NormalMulticurve]:
    """The two boundary curves other than ``c`` of a neighborhood of ``c`` and an arc of ``a``."""
    tri = c.tri
    s, t = arc.start_slot[1], arc.end_slot[1]
    found = []
    for forward in (True, False):
        for back in arrangement.path_along(1, t, s, forward):
            curve = _as_curve(tri, arc.word + back)
            if curve is not None and curve.components[0] != c.components[0]:
                found.append(curve)
    return found


def _band_sum_candidates(d: NormalMulticurve, e: NormalMulticurve, c: NormalMulticurve) -> Iterator[NormalMulticurve]:
    """Boundaries of neighborhoods of d, e and an arc between them avoiding ``c``."""
    tri = d.tri
    gamma = multicurve_of(tri, [c.components[0], d.components[0], e.components[0]])
    drawing = drawing_of(tri, gamma.components)
    jd = gamma.components.index(d.components[0])
    je = gamma.components.index(e.components[0])
    for side_d in (LEFT, RIGHT):
        start = drawing.side_pieces(jd, 0)[0 if side_d == LEFT else 1]
        for side_e in (LEFT, RIGHT):
            end = drawing.side_pieces(je, 0)[0 if side_e == LEFT else 1]
            if drawing.component_of[start] != drawing.component_of[end]:
                continue
            try:
                paths = list(nx.all_shortest_paths(drawing.spine, start, end))
            except nx.NetworkXNoPath:
                continue
            for nodes in paths[:16]:
                darts = []
                for x, y in zip(nodes, nodes[1:]):
                    darts.append(drawing.spine[x][y][min(drawing.spine[x][y])]["dart"])
                arc = ArcPiece(word=tuple(darts), start=(0, 0, side_d), end=(1, 0, side_e))
                pair = (gamma.components[jd], gamma.components[je])
                system = NormalArcSystem(tri.surface, pair, (arc,))
                try:
                    boundary, _ = neighborhood_boundary(pair, system, tri)
                except CurveError:
                    continue
                for word in boundary.components:
                    if word not in pair:
                        yield multicurve_of(tri, [word])


def _acceptable(a: NormalMulticurve, c: NormalMulticurve, candidate: NormalMulticurve, limit: int) -> bool:
    return (
        candidate != c
        and is_genus_separating(candidate)
        and geometric_intersection(candidate, c) == 0
        and geometric_intersection(candidate, a) < limit
    )


@traceFunction
def surgery_reduce(a: NormalMulticurve, c: NormalMulticurve, search_bound: int = 24) -> SurgeryStep:
    """A genus-separating curve disjoint from ``c`` meeting ``a`` fewer times than ``c`` does."""
    a.require_single()
    c.require_single()
    if not is_genus_separating(c):
        raise SurgeryError("surgery needs a genus-separating curve")
    before = geometric_intersection(a, c)
    if before == 0:
        raise SurgeryError("curves are already disjoint; nothing to surger")
    decomposition = cut(c)
    big = max(decomposition.components, key=lambda p: (p.genus, -p.index)).index
    arrangement, arcs = arcs_of(a, c)
    inside = [arc for arc in arcs if arc.component == big]
    if not inside:
        raise SurgeryError("no arc of the curve enters the side of larger genus")
    for arc in inside:
        pants = _pants_curves(arrangement, c, arc)
        for candidate in pants:
            if _acceptable(a, c, candidate, before):
                return SurgeryStep(c, candidate, "pants_boundary", (before, geometric_intersection(a, candidate)))
        if len(pants) == 2:
            d, e = pants
            if geometric_intersection(d, e) == 0 and d != e:
                for candidate in _band_sum_candidates(d, e, c):
                    if _acceptable(a, c, candidate, before):
                        after = geometric_intersection(a, candidate)
                        return SurgeryStep(c, candidate, "band_sum", (before, after))
    # the arcs above always give a pants in exact arithmetic; fall back on a search inside the big side
    for candidate in curves_in_component(c, big, search_bound):
        if _acceptable(a, c, candidate, before):
            return SurgeryStep(c, candidate, "search", (before, geometric_intersection(a, candidate)))
    raise SurgeryError(f"no reducing surgery found for i(a,c)={before}")


def surgery_chain(a: NormalMulticurve, c: NormalMulticurve) -> List[SurgeryStep]:
    """Surger repeatedly until the genus-separating curve misses ``a``."""
    budget = geometric_intersection(a, c)
    steps: List[SurgeryStep] = []
    current = c
    while geometric_intersection(a, current) > 0:
        if len(steps) >= budget:
            raise SurgeryError(f"surgery did not terminate within {budget} steps")
        step = surgery_reduce(a, current)
        steps.append(step)
        current = step.after
    return steps


def crossings_by_component(c: NormalMulticurve, d: NormalMulticurve, alpha: NormalMulticurve) -> Counter:
    """How many crossings of ``c`` with ``d`` fall in each piece of the cut along ``alpha``."""
    tri = c.tri
    cw, dw = c.require_single(), d.require_single()
    counts: Counter = Counter()
    if cw == dw:
        return counts
    decomposition = cut(alpha)
    if geometric_intersection(c, alpha) == 0:
        where = decomposition.drawing.component_of_walk(cw)
        if where is not None:
            counts[where] = geometric_intersection(c, d)
        return counts
    arrangement = Arrangement(tri, (cw, dw) + alpha.components)
    order = arrangement.order[0]
    marks = [(k, arrangement.points[pid]) for k, pid in enumerate(order)]
    first_cut = next(k for k, p in marks if p.curves[1] >= 2)
    component = None
    for step in range(len(marks)):
        k = (first_cut + step) % len(marks)
        point = marks[k][1]
        other = point.curves[1]
        if other >= 2:
            left, right = decomposition.curve_sides[other - 2]
            component = right if point.sign > 0 else left
        elif other == 1:
            counts[component] += 1
    return counts


@traceFunction({"bound": "bound"})
def anchor_curve(
    phi: Framing, alpha: NormalMulticurve, c: NormalMulticurve, component: int, bound: int
) -> Tuple[Optional[NormalMulticurve], int]:
    """An admissible curve off one piece of the cut meeting ``c`` at most four times."""
    tri = phi.tri
    for j in range(alpha.component_count):
        curve = alpha.curve(j)
        if is_admissible(phi, curve) and geometric_intersection(curve, c) <= 4:
            return curve, 0
    best: Optional[NormalMulticurve] = None
    best_count = 5
    for word in single_curves(tri, bound):
        curve = multicurve_of(tri, [word])
        count = geometric_intersection(curve, c)
        if count >= best_count or not is_admissible(phi, curve):
            continue
        if meets_component(curve, alpha, component):
            continue
        best, best_count = curve, count
        if count == 0:
            break
    return best, bound


def _outside_signature(c: NormalMulticurve, alpha: NormalMulticurve, component: int) -> Tuple:
    _, arcs = arcs_of(c, alpha)
    outside = sorted(
        (arc.component, arc.start_curve, arc.end_curve, len(arc.word)) for arc in arcs if arc.component != component
    )
    return tuple(outside)


@traceFunction({"bound": "bound"})
def adjust_inside(
    phi: Framing,
    alpha: NormalMulticurve,
    c: NormalMulticurve,
    d: NormalMulticurve,
    component: int,
    bound: int,
    max_inside: int = 2,
) -> Tuple[Optional[NormalMulticurve], int]:
    """A tame genus-separating curve agreeing with ``c`` off one piece, meeting ``d`` little inside it."""
    if geometric_intersection(c, alpha) == 0:
        return (c if crossings_by_component(c, d, alpha)[component] <= max_inside else None), 0
    reference = _outside_signature(c, alpha, component)
    outside_counts = crossings_by_component(c, d, alpha)
    per_curve = [geometric_intersection(c, alpha.curve(j)) for j in range(alpha.component_count)]
    best, best_inside = None, max_inside + 1
    for word in single_curves(phi.tri, bound):
        candidate = multicurve_of(phi.tri, [word])
        if [geometric_intersection(candidate, alpha.curve(j)) for j in range(alpha.component_count)] != per_curve:
            continue
        if not is_genus_separating(candidate) or _outside_signature(candidate, alpha, component) != reference:
            continue
        counts = crossings_by_component(candidate, d, alpha)
        if any(counts[k] != outside_counts[k] for k in set(counts) | set(outside_counts) if k != component):
            continue
        if counts[component] < best_inside and psi_member(phi, alpha, candidate):
            best, best_inside = candidate, counts[component]
    return best, bound


@dataclass(frozen=True)
class PipelineResult:
    start: NormalMulticurve
    result: NormalMulticurve
    target: NormalMulticurve
    intersections: int
    ceiling: int
    adjusted: Tuple[int, ...] = ()
    anchors: Dict[int, Optional[NormalMulticurve]] = field(default_factory=dict, compare=False)

    @property
    def ok(self) -> bool:
        return self.intersections <= self.ceiling


@traceFunction({"bound": "bound"})
def psi_to_pi_pipeline(
    phi: Framing, alpha: NormalMulticurve, c: NormalMulticurve, d: NormalMulticurve, bound: int
) -> PipelineResult:
    """Modify ``c`` piece by piece toward ``d``, anchoring each piece it meets."""
    for curve in (c, d):
        if not psi_member(phi, alpha, curve):
            raise SurgeryError("pipeline inputs must both be tame for the multicurve")
    ceiling = 2 * abs(phi.surface.euler)
    current = c
    adjusted: List[int] = []
    anchors: Dict[int, Optional[NormalMulticurve]] = {}
    for component in cut(alpha).components:
        if not meets_component(current, alpha, component.index):
            continue
        anchors[component.index], _ = anchor_curve(phi, alpha, current, component.index, bound)
        if crossings_by_component(current, d, alpha)[component.index] <= 2:
            continue
        replacement, _ = adjust_inside(phi, alpha, current, d, component.index, bound)
        if replacement is None:
            logger.warning("no adjustment inside piece %d at bound %d", component.index, bound)
            continue
        current = replacement
        adjusted.append(component.index)
    total = geometric_intersection(current, d)
    if total > ceiling:
        logger.warning("pipeline ended with i(c',d)=%d above %d at bound %d", total, ceiling, bound)
    return PipelineResult(c, current, d, total, ceiling, tuple(adjusted), anchors)

