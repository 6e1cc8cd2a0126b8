"""Finite pieces of the admissible curve graph and its model graphs.

Every snapshot is a closed world: vertices are all qualifying multicurves
up to a total weight bound, edges are all qualifying pairs among them, and
each distance it reports is an upper bound that can only shrink as the
bound grows.
"""
import logging
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import pandas as pd

from framedcurves.errors import EnumerationBoundError, GraphError
from framedcurves.framing import Framing
from framedcurves.surface_core import (
    TOTAL_BOUND,
    NormalMulticurve,
    cut,
    enumerate_multicurves,
    geometric_intersection,
    is_genus_separating,
    multicurve_of,
    single_curves,
)
from framedcurves.surgery import psi_construct
from framedcurves.telemetry.setup_telemetry import traceFunction
from framedcurves.witness import is_admissible, is_k_vertex

logger = logging.getLogger(__name__)

CADM = "cadm"
GENUS_SEP = "genus_sep"
MODEL_K = "model_K"
MODEL_KBAR = "model_Kbar"
E_GRAPH = "E_graph"
KINDS = (CADM, GENUS_SEP, MODEL_K, MODEL_KBAR, E_GRAPH)

DISJOINT_EDGE = "disjoint"
ADD_REMOVE = "add_remove"
FLIP = "flip"

Vertex = Union[int, NormalMulticurve]


@dataclass(frozen=True)
class GraphSnapshot:
    kind: str
    vertices: Tuple[NormalMulticurve, ...]
    edges: Tuple[Tuple[int, int, str], ...]
    enumeration_bound: int
    framing: Framing = field(compare=False, repr=False)
    edge_details: Dict[Tuple[int, int], str] = field(default_factory=dict, compare=False, repr=False)
    unknown: Tuple[NormalMulticurve, ...] = field(default=(), compare=False, repr=False)
    max_components: Optional[int] = field(default=None, compare=False)
    divisorial_bound: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self.vertices)))
        for i, j, kind in self.edges:
            graph.add_edge(i, j, kind=kind)
        object.__setattr__(self, "_graph", graph)
        object.__setattr__(self, "_index", {v: k for k, v in enumerate(self.vertices)})

    @property
    def graph(self) -> nx.Graph:
        return self._graph

    def index_of(self, vertex: Vertex) -> int:
        if isinstance(vertex, int):
            if not 0 <= vertex < len(self.vertices):
                raise GraphError(f"no vertex {vertex} in the {self.kind} snapshot")
            return vertex
        try:
            return self._index[vertex]
        except KeyError:
            raise GraphError(f"multicurve is not a vertex of the {self.kind} snapshot") from None

    def __contains__(self, vertex: NormalMulticurve) -> bool:
        return vertex in self._index

    @property
    def component_cap(self) -> int:
        """Largest component count the enumeration allowed; ξ(S) when uncapped."""
        if self.kind in (CADM, GENUS_SEP):
            return 1
        return self.max_components or self.framing.surface.complexity

    def neighbors(self, vertex: Vertex) -> List[int]:
        return sorted(self.graph.neighbors(self.index_of(vertex)))

    def to_dict(self) -> Dict:
        return {
            "kind": self.kind,
            "surface": self.framing.surface.as_dict(),
            "framing": self.framing.to_dict(),
            "bound": self.enumeration_bound,
            "vertices": [v.to_dict()["weights"] for v in self.vertices],
            "edges": [[i, j, kind] for i, j, kind in self.edges],
            "flips": [[i, j, kind] for (i, j), kind in sorted(self.edge_details.items())],
            "unknown": [v.to_dict()["weights"] for v in self.unknown],
            "max_components": self.component_cap,
            "divisorial_bound": self.divisorial_bound,
        }

    def to_dot(self) -> str:
        lines = [f"graph {self.kind} {{"]
        for k, v in enumerate(self.vertices):
            label = " ".join(str(w) for w in v.weights)
            lines.append(f'  {k} [label="{label}"];')
        for i, j, kind in self.edges:
            lines.append(f'  {i} -- {j} [kind="{kind}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def distance_table(self, sources: Optional[Sequence[int]] = None) -> pd.DataFrame:
        """Long-format BFS distances from ``sources`` (default: every vertex)."""
        rows = []
        for s in sources if sources is not None else range(len(self.vertices)):
            for t, d in sorted(nx.single_source_shortest_path_length(self.graph, s).items()):
                rows.append({"source": s, "target": t, "distance": d, "bound": self.enumeration_bound})
        return pd.DataFrame(rows, columns=["source", "target", "distance", "bound"])


def _require_genus(phi: Framing) -> None:
    if phi.genus < 3:
        raise GraphError(f"graphs are only built in genus at least 3, got {phi.genus}")


def _disjointness_edges(vertices: Sequence[NormalMulticurve]) -> List[Tuple[int, int, str]]:
    edges = []
    for i, j in combinations(range(len(vertices)), 2):
        if geometric_intersection(vertices[i], vertices[j]) == 0:
            edges.append((i, j, DISJOINT_EDGE))
    return edges


def _flip_kind(mu: NormalMulticurve, x: NormalMulticurve, y: NormalMulticurve) -> Optional[str]:
    """How swapping x for y inside a piece of the cut along ``mu`` counts as a flip, if it does."""
    decomposition = cut(mu)
    where_x = decomposition.drawing.component_of_walk(x.components[0])
    where_y = decomposition.drawing.component_of_walk(y.components[0])
    if where_x is None or where_x != where_y:
        return None
    piece = decomposition.component(where_x)
    meet = geometric_intersection(x, y)
    if piece.xi == 1:
        if piece.genus == 1 and meet == 1:
            return "torus"
        if piece.genus == 0 and meet == 2:
            return "four_holed_sphere"
        return None
    if piece.xi > 1 and meet == 0:
        return "disjoint"
    return None


def model_edges(
    vertices: Sequence[NormalMulticurve],
) -> Tuple[List[Tuple[int, int, str]], Dict[Tuple[int, int], str]]:
    """Add/remove edges between vertices one curve apart, and flips with their kind."""
    index = {frozenset(v.components): k for k, v in enumerate(vertices)}
    edges: List[Tuple[int, int, str]] = []
    flips: Dict[Tuple[int, int], str] = {}
    for k, v in enumerate(vertices):
        parts = v.components
        for drop in range(len(parts)):
            smaller = frozenset(parts[:drop] + parts[drop + 1 :])
            j = index.get(smaller)
            if j is not None:
                edges.append((min(j, k), max(j, k), ADD_REMOVE))
    # flips: same size, one component swapped
    by_rest: Dict[FrozenSet, List[Tuple[int, tuple]]] = {}
    for k, v in enumerate(vertices):
        parts = v.components
        for drop in range(len(parts)):
            rest = frozenset(parts[:drop] + parts[drop + 1 :])
            by_rest.setdefault(rest, []).append((k, parts[drop]))
    for rest, members in by_rest.items():
        if len(members) < 2:
            continue
        tri = vertices[members[0][0]].tri
        mu = multicurve_of(tri, list(rest))
        for (i, x), (j, y) in combinations(members, 2):
            kind = _flip_kind(mu, multicurve_of(tri, [x]), multicurve_of(tri, [y]))
            if kind is not None:
                a, b = min(i, j), max(i, j)
                edges.append((a, b, FLIP))
                flips[(a, b)] = kind
    edges.sort()
    return edges, flips


def build_graph(
    kind: str, phi: Framing, weight_bound: int, max_components: Optional[int] = None, divisorial_bound: int = 8
) -> GraphSnapshot:
    """All qualifying vertices of total weight at most ``weight_bound`` and every edge among them."""
    if kind not in KINDS:
        raise GraphError(f"unknown graph kind {kind!r}")
    _require_genus(phi)
    tri = phi.tri
    if kind == E_GRAPH:
        from framedcurves.strata import build_E_graph

        return build_E_graph(phi, weight_bound, max_components=max_components)
    if kind in (CADM, GENUS_SEP):
        if kind == CADM:
            keep = lambda c: is_admissible(phi, c)  # noqa: E731
        else:
            keep = is_genus_separating
        vertices = [multicurve_of(tri, [w]) for w in single_curves(tri, weight_bound)]
        vertices = [v for v in vertices if keep(v)]
        edges = _disjointness_edges(vertices)
        snapshot = GraphSnapshot(kind, tuple(vertices), tuple(edges), weight_bound, phi)
    elif kind == MODEL_K:
        vertices = list(
            enumerate_multicurves(
                tri,
                weight_bound,
                lambda g: is_k_vertex(phi, g),
                max_components=max_components,
                bound_mode=TOTAL_BOUND,
            )
        )
        edges, flips = model_edges(vertices)
        snapshot = GraphSnapshot(
            kind, tuple(vertices), tuple(edges), weight_bound, phi, flips, max_components=max_components
        )
    else:
        from framedcurves.strata import YES, UNKNOWN, kbar_vertex

        vertices, unknown = [], []
        for gamma in enumerate_multicurves(tri, weight_bound, max_components=max_components, bound_mode=TOTAL_BOUND):
            verdict = kbar_vertex(phi, gamma, divisorial_bound)
            if verdict == YES:
                vertices.append(gamma)
            elif verdict == UNKNOWN:
                unknown.append(gamma)
        edges, flips = model_edges(vertices)
        snapshot = GraphSnapshot(
            kind,
            tuple(vertices),
            tuple(edges),
            weight_bound,
            phi,
            flips,
            tuple(unknown),
            max_components=max_components,
            divisorial_bound=divisorial_bound,
        )
        if unknown:
            logger.warning("%d multicurves undecided for %s at divisorial bound %d", len(unknown), kind, divisorial_bound)
    logger.info("%s snapshot at bound %d: %d vertices, %d edges", kind, weight_bound, len(snapshot.vertices), len(snapshot.edges))
    return snapshot


def distance(snapshot: GraphSnapshot, u: Vertex, v: Vertex) -> Optional[int]:
    """BFS distance inside the snapshot, or None when no path exists at this bound."""
    i, j = snapshot.index_of(u), snapshot.index_of(v)
    try:
        return nx.shortest_path_length(snapshot.graph, i, j)
    except nx.NetworkXNoPath:
        return None


def diameter_of(snapshot: GraphSnapshot, members: Iterable[Vertex]) -> Optional[int]:
    """Largest pairwise distance among vertices of the snapshot; None if two are not connected."""
    indices = sorted({snapshot.index_of(m) for m in members})
    worst = 0
    for k, i in enumerate(indices):
        reach = nx.single_source_shortest_path_length(snapshot.graph, i)
        for j in indices[k + 1 :]:
            if j not in reach:
                return None
            worst = max(worst, reach[j])
    return worst


@dataclass(frozen=True)
class ProjectionResult:
    source: NormalMulticurve
    image: Tuple[NormalMulticurve, ...]
    map_name: str
    diameter_in_target: Optional[int] = None
    bound: int = 0

    def __contains__(self, curve: NormalMulticurve) -> bool:
        return curve in self.image


def pi_projection(
    phi: Framing, c: NormalMulticurve, weight_bound: int, cadm: Optional[GraphSnapshot] = None
) -> ProjectionResult:
    """Admissible curves within the bound that miss the genus-separating curve ``c``."""
    if not is_genus_separating(c):
        raise GraphError("projection is defined on genus-separating curves")
    if cadm is not None:
        image = tuple(v for v in cadm.vertices if geometric_intersection(v, c) == 0)
        return ProjectionResult(c, image, "Pi", diameter_of(cadm, image) if image else None, cadm.enumeration_bound)
    tri = phi.tri
    image = []
    for word in single_curves(tri, weight_bound):
        curve = multicurve_of(tri, [word])
        if geometric_intersection(curve, c) == 0 and is_admissible(phi, curve):
            image.append(curve)
    return ProjectionResult(c, tuple(image), "Pi", None, weight_bound)


def p_set(phi: Framing, mu: NormalMulticurve, weight_bound: int, divisorial_bound: int = 8) -> List[NormalMulticurve]:
    """Vertices of the model graph within the bound that contain ``mu``."""
    from framedcurves.strata import NO, UNKNOWN, kbar_vertex

    verdict = kbar_vertex(phi, mu, divisorial_bound)
    if verdict == NO:
        raise GraphError("multicurve is not a vertex of the coned model graph")
    if verdict == UNKNOWN:
        logger.warning("coned-vertex status undecided at divisorial bound %d; proceeding", divisorial_bound)
    found = []
    for gamma in enumerate_multicurves(phi.tri, weight_bound, bound_mode=TOTAL_BOUND):
        if gamma.contains(mu) and is_k_vertex(phi, gamma):
            found.append(gamma)
    if not found:
        logger.warning("no model-graph vertex contains the multicurve at bound %d", weight_bound)
    return found


@traceFunction({"bound": "weight_bound"})
def theta(
    phi: Framing,
    mu: NormalMulticurve,
    weight_bound: int,
    samples: int = 4,
    e_graph: Optional[GraphSnapshot] = None,
    divisorial_bound: int = 8,
) -> ProjectionResult:
    """Admissible curves reached from ``mu`` through a few model-graph vertices containing it."""
    found = p_set(phi, mu, weight_bound, divisorial_bound)
    if not found:
        raise EnumerationBoundError("no model-graph vertex contains the multicurve", weight_bound)
    found.sort(key=lambda g: (g.component_count, g.total_weight, g.components))
    image: Dict[NormalMulticurve, None] = {}
    for alpha in found[:samples]:
        c = psi_construct(phi, alpha)
        for j in range(alpha.component_count):
            part = alpha.curve(j)
            if is_admissible(phi, part) and geometric_intersection(part, c) == 0:
                image.setdefault(part, None)
        for curve in pi_projection(phi, c, weight_bound).image:
            image.setdefault(curve, None)
    curves = tuple(image)
    diameter = None
    if e_graph is not None:
        present = [v for v in curves if v in e_graph]
        diameter = diameter_of(e_graph, present) if present else None
    return ProjectionResult(mu, curves, "Theta", diameter, weight_bound)


def pi_constants_report(genus_sep: GraphSnapshot, cadm: GraphSnapshot) -> Dict:
    """Largest projection diameters over vertices and over edges of a genus-separating snapshot."""
    phi = genus_sep.framing
    images = {k: pi_projection(phi, c, cadm.enumeration_bound, cadm) for k, c in enumerate(genus_sep.vertices)}
    vertex_worst, edge_worst, disconnected = 0, 0, 0
    for result in images.values():
        if result.diameter_in_target is None and result.image:
            disconnected += 1
        vertex_worst = max(vertex_worst, result.diameter_in_target or 0)
    for i, j, _ in genus_sep.edges:
        union = set(images[i].image) | set(images[j].image)
        if not union:
            continue
        d = diameter_of(cadm, union)
        if d is None:
            disconnected += 1
        else:
            edge_worst = max(edge_worst, d)
    empty = sum(1 for r in images.values() if not r.image)
    return {
        "vertices": len(genus_sep.vertices),
        "edges": len(genus_sep.edges),
        "max_vertex_diameter": vertex_worst,
        "max_edge_diameter": edge_worst,
        "empty_images": empty,
        "disconnected": disconnected,
        "bound": cadm.enumeration_bound,
    }


def intersection_distance_report(genus_sep: GraphSnapshot, max_intersection: int = 2) -> Dict:
    """Observed largest distance between vertices meeting at most ``max_intersection`` times."""
    worst, pairs, unreachable = 0, 0, 0
    for i, j in combinations(range(len(genus_sep.vertices)), 2):
        if geometric_intersection(genus_sep.vertices[i], genus_sep.vertices[j]) > max_intersection:
            continue
        pairs += 1
        d = distance(genus_sep, i, j)
        if d is None:
            unreachable += 1
        else:
            worst = max(worst, d)
    return {"pairs": pairs, "observed_N": worst, "unreachable": unreachable, "bound": genus_sep.enumeration_bound}


def inclusion_lipschitz_report(cadm: GraphSnapshot, model: GraphSnapshot) -> Dict:
    """Model-graph distances between admissible curves adjacent in the admissible curve graph."""
    checked, missing, worst = 0, 0, 0
    violations = []
    for i, j, _ in cadm.edges:
        a, b = cadm.vertices[i], cadm.vertices[j]
        if a not in model or b not in model:
            missing += 1
            continue
        d = distance(model, a, b)
        checked += 1
        if d is None or d > 2:
            violations.append((i, j, d))
        else:
            worst = max(worst, d)
    return {"checked": checked, "missing": missing, "max_distance": worst, "violations": violations}


@traceFunction({"bound": "bound"})
def connectivity_report(
    phi: Framing,
    rng: random.Random,
    pair_bound: int = 8,
    bound: int = 24,
    samples: int = 50,
    max_bound: Optional[int] = None,
) -> Dict:
    """Sampled admissible pairs and whether BFS connects them, enlarging the bound once on failure."""
    tri = phi.tri
    small = [multicurve_of(tri, [w]) for w in single_curves(tri, pair_bound)]
    small = [c for c in small if is_admissible(phi, c)]
    if len(small) < 2:
        raise EnumerationBoundError("fewer than two admissible curves to sample", pair_bound)
    pairs = [tuple(rng.sample(small, 2)) for _ in range(samples)]
    snapshot = build_graph(CADM, phi, bound)
    failures = [(a, b) for a, b in pairs if distance(snapshot, a, b) is None]
    final_bound = bound
    if failures:
        final_bound = 2 * bound if max_bound is None else min(2 * bound, max_bound)
        if final_bound > bound:
            logger.info("%d pairs unconnected at bound %d; retrying at %d", len(failures), bound, final_bound)
            snapshot = build_graph(CADM, phi, final_bound)
            failures = [(a, b) for a, b in failures if distance(snapshot, a, b) is None]
    passed = samples - len(failures)
    return {
        "samples": samples,
        "passed": passed,
        "pass_rate": passed / samples if samples else 1.0,
        "bound": final_bound,
        "pair_bound": pair_bound,
        "failures": [(a.weights, b.weights) for a, b in failures],
    }
