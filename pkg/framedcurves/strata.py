"""Level splittings, divisorial candidates, and the graphs built from them.

Orienting each curve of a multicurve so its winding number is negative is
forced (the two orientations have opposite windings), so a level splitting
is a surjective level function on the pieces of the cut that strictly
drops across every curve from its left to its right.
"""
import logging
import random
from dataclasses import dataclass, field
from itertools import chain, combinations
from typing import Dict, List, Optional, Sequence, Tuple

from framedcurves.errors import EnumerationBoundError, FramingError, GraphError
from framedcurves.framing import Framing, invariants, restrict, winding_of_walk
from framedcurves.graphs import E_GRAPH, DISJOINT_EDGE, GraphSnapshot
from framedcurves.surface_core import (
    TOTAL_BOUND,
    MappingClassWord,
    NormalMulticurve,
    cut,
    enumerate_multicurves,
    geometric_intersection,
    meets_component,
    multicurve_of,
    single_curves,
)
from framedcurves.telemetry.setup_telemetry import traceFunction
from framedcurves.witness import complement_pieces, is_admissible, is_witness, WitnessQuery

logger = logging.getLogger(__name__)

YES = "yes"
NO = "no"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class LevelSplitting:
    """Levels run 0, -1, ..., -N+1 from the top; ``reversed_curves`` flags curves used against their stored orientation."""

    multicurve: NormalMulticurve
    reversed_curves: Tuple[bool, ...]
    levels: Tuple[int, ...]
    N: int

    def level_of(self, component: int) -> int:
        return self.levels[component]

    def top(self) -> List[int]:
        return [k for k, level in enumerate(self.levels) if level == 0]

    def to_dict(self) -> Dict:
        return {
            "multicurve": self.multicurve.to_dict(),
            "orientations": [-1 if r else 1 for r in self.reversed_curves],
            "levels": list(self.levels),
            "N": self.N,
        }


def _oriented_sides(phi: Framing, gamma: NormalMulticurve) -> Optional[Tuple[Tuple[bool, ...], List[Tuple[int, int]]]]:
    """Negative orientation of every curve with its (left, right) pieces, or None if some curve has winding 0."""
    decomposition = cut(gamma)
    flips, sides = [], []
    for j, word in enumerate(gamma.components):
        value = winding_of_walk(phi, word)
        if value == 0:
            return None
        left, right = decomposition.curve_sides[j]
        if value > 0:
            left, right = right, left
        flips.append(value > 0)
        sides.append((left, right))
    return tuple(flips), sides


def _layerings(count: int, above: Dict[int, set]) -> List[List[int]]:
    """Every surjective depth assignment with depth(x) > depth(y) whenever y is required above x."""
    results: List[List[int]] = []
    depth = [-1] * count

    def place(assigned: set, layer: int) -> None:
        if len(assigned) == count:
            results.append(list(depth))
            return
        ready = [x for x in range(count) if x not in assigned and above[x] <= assigned]
        for size in range(1, len(ready) + 1):
            for chosen in combinations(ready, size):
                for x in chosen:
                    depth[x] = layer
                place(assigned | set(chosen), layer + 1)
                for x in chosen:
                    depth[x] = -1

    place(set(), 0)
    return results


def level_assignments(phi: Framing, gamma: NormalMulticurve) -> List[LevelSplitting]:
    """All level splittings of ``gamma`` under ``phi`` (empty when it is not a level multicurve)."""
    if gamma.is_empty():
        raise GraphError("level splittings need a nonempty multicurve")
    oriented = _oriented_sides(phi, gamma)
    if oriented is None:
        return []
    flips, sides = oriented
    pieces = len(cut(gamma).components)
    above: Dict[int, set] = {k: set() for k in range(pieces)}
    for left, right in sides:
        if left == right:
            return []
        above[right].add(left)
    splittings = []
    for depth in _layerings(pieces, above):
        n_levels = max(depth) + 1
        splittings.append(LevelSplitting(gamma, flips, tuple(-d for d in depth), n_levels))
    holomorphic = all(s < 0 for s in phi.signature)
    decomposition = cut(gamma)
    for splitting in splittings:
        for k in splitting.top():
            if holomorphic and decomposition.components[k].genus == 0:
                raise FramingError(f"top-level piece {k} has no genus under a holomorphic framing")
    return splittings


@dataclass(frozen=True)
class DivisorialCandidate:
    multicurve: NormalMulticurve
    splitting: Optional[LevelSplitting]
    checks: Dict[str, bool] = field(compare=False)
    single_admissible: bool = False

    @property
    def accepted(self) -> bool:
        return all(self.checks.values())

    def __bool__(self) -> bool:
        return self.accepted


def is_divisorial_candidate(phi: Framing, gamma: NormalMulticurve, max_bound: int = 24) -> DivisorialCandidate:
    """Necessary conditions for ``gamma`` to be a divisorial multicurve; a pass is not a certificate."""
    if not invariants(phi).holomorphic_type:
        raise FramingError("divisorial candidates need a framing of holomorphic type")
    if gamma.component_count == 1 and is_admissible(phi, gamma):
        return DivisorialCandidate(gamma, None, {"single_admissible": True}, single_admissible=True)
    splittings = [s for s in level_assignments(phi, gamma) if s.N == 2] if not gamma.is_empty() else []
    checks: Dict[str, bool] = {"two_level": len(splittings) == 1}
    if len(splittings) != 1:
        return DivisorialCandidate(gamma, None, checks)
    splitting = splittings[0]
    decomposition = cut(gamma)
    top = splitting.top()
    checks["top_genus"] = all(decomposition.components[k].genus > 0 for k in top)
    arf_ok = True
    for k in top:
        if decomposition.components[k].genus == 1:
            data = restrict(phi, gamma, k, max_bound=max_bound).arf_data or {}
            if data.get("arf1") != 0:
                arf_ok = False
    checks["genus_one_arf1"] = arf_ok
    return DivisorialCandidate(gamma, splitting, checks)


@traceFunction({"bound": "weight_bound"})
def build_E_graph(phi: Framing, weight_bound: int, max_components: Optional[int] = None) -> GraphSnapshot:
    """Admissible curves and divisorial candidates within the bound, joined when disjoint."""
    if phi.genus < 3:
        raise GraphError(f"graphs are only built in genus at least 3, got {phi.genus}")
    if not invariants(phi).holomorphic_type:
        raise FramingError("the strata boundary graph needs a framing of holomorphic type")
    vertices = []
    for gamma in enumerate_multicurves(phi.tri, weight_bound, max_components=max_components, bound_mode=TOTAL_BOUND):
        if is_divisorial_candidate(phi, gamma):
            vertices.append(gamma)
    edges = []
    for i, j in combinations(range(len(vertices)), 2):
        if geometric_intersection(vertices[i], vertices[j]) == 0:
            edges.append((i, j, DISJOINT_EDGE))
    snapshot = GraphSnapshot(E_GRAPH, tuple(vertices), tuple(edges), weight_bound, phi, max_components=max_components)
    logger.info(
        "E graph at bound %d (up to %d curves): %d vertices, %d edges",
        weight_bound,
        snapshot.component_cap,
        len(vertices),
        len(edges),
    )
    return snapshot


def _avoids(delta: NormalMulticurve, gamma: NormalMulticurve, component: int) -> bool:
    return not any(meets_component(delta.curve(j), gamma, component) for j in range(delta.component_count))


def _subsets(items: Sequence) -> List[Tuple]:
    return [s for s in chain.from_iterable(combinations(items, r) for r in range(1, len(items) + 1))]


def disjoint_candidate(
    phi: Framing,
    gamma: NormalMulticurve,
    component: int,
    divisorial_bound: int,
    max_components: Optional[int] = None,
) -> Tuple[Optional[NormalMulticurve], bool]:
    """A divisorial candidate missing one piece of the cut, and whether the search was exhaustive."""
    decomposition = cut(gamma)
    rim = sorted({gamma.components[j] for j, _ in decomposition.component(component).boundary})
    tri = phi.tri
    for subset in _subsets(rim):
        delta = multicurve_of(tri, list(subset))
        if is_divisorial_candidate(phi, delta):
            return delta, True
    # complements with no room beyond pants leave only the rim curves
    roomy = any(z.circles > 3 or z.genus > 0 for z in complement_pieces(phi, gamma, component))
    if not roomy:
        return None, True
    for delta in enumerate_multicurves(tri, divisorial_bound, max_components=max_components, bound_mode=TOTAL_BOUND):
        if _avoids(delta, gamma, component) and is_divisorial_candidate(phi, delta):
            return delta, False
    return None, False


def kbar_vertex(phi: Framing, mu: NormalMulticurve, divisorial_bound: int) -> str:
    """``YES``, ``NO`` or ``UNKNOWN``: whether no piece of the cut is a witness left uncovered by a divisorial candidate."""
    if mu.is_empty():
        return NO
    verdict = YES
    for piece in cut(mu).components:
        if not is_witness(WitnessQuery(mu, piece.index, phi)):
            continue
        delta, exhaustive = disjoint_candidate(phi, mu, piece.index, divisorial_bound)
        if delta is not None:
            logger.debug("witness piece %d coned off by %s", piece.index, delta.weights)
            continue
        if exhaustive:
            return NO
        verdict = UNKNOWN
    return verdict


def translated_candidate_report(
    phi: Framing,
    beta: NormalMulticurve,
    gamma: NormalMulticurve,
    component: int,
    targets: Sequence[NormalMulticurve],
    rng: random.Random,
    words: int = 20,
    length: int = 3,
    pool_bound: int = 8,
) -> Dict:
    """Push a candidate missing a witness piece around by twists that keep missing it.

    For each target multicurve, reports the smallest intersection number with
    a translate of ``beta`` found among random twist words about curves
    disjoint from the piece.
    """
    if not _avoids(beta, gamma, component):
        raise GraphError("candidate must miss the witness piece")
    tri = phi.tri
    pool = [w for w in single_curves(tri, pool_bound) if not meets_component(multicurve_of(tri, [w]), gamma, component)]
    if not pool:
        raise EnumerationBoundError("no twist curves miss the piece", pool_bound)
    translates = [beta]
    for _ in range(words):
        word = MappingClassWord.random(tri, rng, length, pool=pool)
        translates.append(word.apply(beta))
    best = [min(geometric_intersection(t, target) for t in translates) for target in targets]
    return {"targets": len(targets), "words": words, "best": best, "observed_N": max(best) if best else 0}
