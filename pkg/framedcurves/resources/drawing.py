"""Cutting the surface open along a disjoint family of curves.

The curves are drawn in normal position.  Inside each triangle their arcs
split it into pieces: a run of pieces nested around each corner plus one
central piece.  Pieces are glued across the segments that the strands cut
each edge into, so the components of the glued-up piece graph are exactly
the components of the cut surface.  Every piece is a disk and every segment
an interval, which makes Euler characteristics a matter of counting.

The directed version of the piece graph (the *spine*) carries, on each
segment crossing, the dart it corresponds to; closed walks and paths in it
are curves and arcs in the cut surface, written as words in the original
triangulation.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from framedcurves.errors import CurveError
from framedcurves.resources.crossings import is_simple
from framedcurves.resources.triangulation import Triangulation, Walk
from framedcurves.resources.walks import (
    add_weights,
    corner_counts,
    edge_weights,
    face_keys,
    inverse,
    is_primitive,
    position_key,
    reduce_walk,
    rotate,
    trace_weights,
    unoriented_key,
)

logger = logging.getLogger(__name__)

CENTRAL = -1
LEFT = "left"
RIGHT = "right"


@dataclass
class ComponentInfo:
    index: int
    pieces: List[int] = field(default_factory=list)
    segments: int = 0
    punctures: List[int] = field(default_factory=list)
    boundary: List[Tuple[int, str]] = field(default_factory=list)

    @property
    def euler(self) -> int:
        return len(self.pieces) - self.segments

    @property
    def circles(self) -> int:
        return len(self.boundary) + len(self.punctures)

    @property
    def genus(self) -> int:
        return (2 - self.euler - self.circles) // 2


class Drawing:
    """Pieces of the surface cut along pairwise disjoint simple curves."""

    def __init__(self, tri: Triangulation, curves: Sequence[Walk] = ()):
        self.tri = tri
        self.curves: Tuple[Walk, ...] = tuple(tuple(c) for c in curves)
        if self.curves:
            self.weights = add_weights(*(edge_weights(tri, c) for c in self.curves))
        else:
            self.weights = (0,) * tri.n_edges
        self.corners = corner_counts(tri, self.weights)
        self.positions: List[Tuple[int, ...]] = self._match_strands()
        self.owner: Dict[Tuple[int, int], int] = {}
        for j, curve in enumerate(self.curves):
            for d, p in zip(curve, self.positions[j]):
                self.owner[position_key(tri, self.weights, d, p)] = j

        self.pieces: List[Tuple[int, int, int]] = []
        self._piece_id: Dict[Tuple[int, int, int], int] = {}
        for v in range(tri.n_triangles):
            self._add_piece((v, CENTRAL, 0))
            for i in range(3):
                for q in range(self.corners[v][i]):
                    self._add_piece((v, i, q))

        self.spine = nx.MultiDiGraph()
        self.spine.add_nodes_from(range(len(self.pieces)))
        self._segment_count: Dict[int, int] = {}
        segment_piece: List[int] = []
        for e, (d0, d1) in enumerate(tri.edges):
            w = self.weights[e]
            for s in range(w + 1):
                a = self.piece_at(d0, s)
                b = self.piece_at(d1, w - s)
                self.spine.add_edge(a, b, key=(e, s, 0), dart=d0)
                self.spine.add_edge(b, a, key=(e, s, 1), dart=d1)
                segment_piece.append(a)

        self.component_of: List[int] = [0] * len(self.pieces)
        groups = sorted(
            (sorted(c) for c in nx.weakly_connected_components(self.spine)), key=lambda c: c[0]
        )
        self.components: List[ComponentInfo] = []
        for idx, members in enumerate(groups):
            self.components.append(ComponentInfo(index=idx, pieces=members))
            for p in members:
                self.component_of[p] = idx
        for a in segment_piece:
            self.components[self.component_of[a]].segments += 1

        for v, cycle in enumerate(tri.vertices):
            for i in range(3):
                face = tri.face_of[cycle[(i + 1) % 3]]
                comp = self.components[self.component_of[self.corner_piece(v, i)]]
                if face not in comp.punctures:
                    comp.punctures.append(face)
        for comp in self.components:
            comp.punctures.sort()

        self.curve_sides: List[Tuple[int, int]] = []
        for j in range(len(self.curves)):
            left, right = self.side_pieces(j, 0)
            sides = (self.component_of[left], self.component_of[right])
            self.curve_sides.append(sides)
            self.components[sides[0]].boundary.append((j, LEFT))
            self.components[sides[1]].boundary.append((j, RIGHT))
        for comp in self.components:
            if (2 - comp.euler - comp.circles) % 2 or comp.genus < 0:
                raise CurveError(f"inconsistent cut component {comp.index}")
        logger.debug(
            "drew %d curves: %d pieces, %d components", len(self.curves), len(self.pieces), len(self.components)
        )

    def _add_piece(self, key: Tuple[int, int, int]) -> None:
        self._piece_id[key] = len(self.pieces)
        self.pieces.append(key)

    def _match_strands(self) -> List[Tuple[int, ...]]:
        tri = self.tri
        strands = trace_weights(tri, self.weights)
        if len(strands) != len(self.curves):
            raise CurveError("curves are not pairwise disjoint simple curves")
        readings = []
        for strand in strands:
            back = inverse(tri, strand.walk)
            back_positions = tuple(
                self.weights[tri.edge_of[d]] - 1 - p for d, p in zip(reversed(strand.walk), reversed(strand.positions))
            )
            readings.append(((strand.walk, strand.positions), (back, back_positions)))
        used = [False] * len(strands)
        positions: List[Tuple[int, ...]] = []
        for curve in self.curves:
            found = None
            for s, both in enumerate(readings):
                if used[s] or len(both[0][0]) != len(curve):
                    continue
                for walk, places in both:
                    for k in range(len(curve)):
                        if rotate(walk, k) == curve:
                            found = (s, rotate(places, k))
                            break
                    if found:
                        break
                if found:
                    break
            if found is None:
                raise CurveError("curves are not pairwise disjoint simple curves")
            used[found[0]] = True
            positions.append(found[1])
        return positions

    def piece_at(self, dart: int, segment: int) -> int:
        """Piece of the triangle of ``dart`` touching segment ``segment`` of that side."""
        tri = self.tri
        v = tri.vertex_of[dart]
        i = tri.slot[dart]
        before = self.corners[v][(i - 1) % 3]
        if segment < before:
            return self._piece_id[(v, (i - 1) % 3, segment)]
        if segment == before:
            return self._piece_id[(v, CENTRAL, 0)]
        return self._piece_id[(v, i, self.weights[tri.edge_of[dart]] - segment)]

    def corner_piece(self, vertex: int, corner: int) -> int:
        if self.corners[vertex][corner] > 0:
            return self._piece_id[(vertex, corner, 0)]
        return self._piece_id[(vertex, CENTRAL, 0)]

    def side_pieces(self, curve: int, index: int) -> Tuple[int, int]:
        """(left, right) pieces beside ``curve`` where it leaves through its dart ``index``."""
        d = self.curves[curve][index]
        p = self.positions[curve][index]
        return self.piece_at(d, p + 1), self.piece_at(d, p)

    def side_component(self, curve: int, side: str) -> int:
        left, right = self.curve_sides[curve]
        return left if side == LEFT else right

    def dual_graph(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        for comp in self.components:
            graph.add_node(comp.index, genus=comp.genus, euler=comp.euler, punctures=tuple(comp.punctures))
        for j, (left, right) in enumerate(self.curve_sides):
            graph.add_edge(left, right, key=j)
        return graph

    def path_darts(self, source: int, target: int) -> Optional[Walk]:
        """Darts along a shortest spine path between two pieces, or None."""
        try:
            nodes = nx.shortest_path(self.spine, source, target)
        except nx.NetworkXNoPath:
            return None
        darts = []
        for a, b in zip(nodes, nodes[1:]):
            key = min(self.spine[a][b])
            darts.append(self.spine[a][b][key]["dart"])
        return tuple(darts)

    def component_of_walk(self, walk: Walk) -> Optional[int]:
        """Component containing a simple curve disjoint from the drawn curves.

        Returns None when the curve is one of the drawn curves.
        """
        key = unoriented_key(self.tri, walk)
        if any(unoriented_key(self.tri, c) == key for c in self.curves):
            return None
        combined = Drawing(self.tri, self.curves + (tuple(walk),))
        tri = self.tri
        d = walk[0]
        e = tri.edge_of[d]
        pos = combined.positions[-1][0]
        cpos = pos if tri.is_canonical(d) else combined.weights[e] - 1 - pos
        below = 0
        for d2, p2 in zip(walk, combined.positions[-1]):
            if tri.edge_of[d2] == e:
                q = p2 if tri.is_canonical(d2) else combined.weights[e] - 1 - p2
                if q < cpos:
                    below += 1
        return self.component_of[self.piece_at(tri.edges[e][0], cpos - below)]

    def closed_walks(self, component: int, bound: int) -> Iterator[Walk]:
        """Closed non-backtracking spine walks in a component, as dart words.

        Each cyclic walk is produced starting from its least spine edge
        (possibly more than once when that edge repeats).
        """
        if bound <= 0:
            return
        members = self.components[component].pieces
        sub = self.spine.subgraph(members)
        edges = sorted((u, v, k, data["dart"]) for u, v, k, data in sub.edges(keys=True, data=True))
        outgoing: Dict[int, List[Tuple[int, int, int]]] = {u: [] for u in members}
        for eid, (u, v, _, d) in enumerate(edges):
            outgoing[u].append((eid, v, d))
        reverse = sub.reverse(copy=False)
        twin = self.tri.twin
        for start, (u0, v0, _, d0) in enumerate(edges):
            dist = nx.single_source_shortest_path_length(reverse, u0)
            if dist.get(v0, bound + 1) + 1 > bound:
                continue
            path = [d0]
            stack = [iter(outgoing[v0])]
            nodes = [v0]
            while stack:
                advanced = False
                for eid, nxt, d in stack[-1]:
                    if eid < start or d == twin[path[-1]]:
                        continue
                    if len(path) + 1 + dist.get(nxt, bound + 1) > bound:
                        continue
                    path.append(d)
                    if nxt == u0 and d0 != twin[d]:
                        yield tuple(path)
                    stack.append(iter(outgoing[nxt]))
                    nodes.append(nxt)
                    advanced = True
                    break
                if not advanced:
                    stack.pop()
                    nodes.pop()
                    path.pop()
                    if not path:
                        break

    def simple_curves(self, component: int, bound: int) -> List[Walk]:
        """Essential simple curves inside a component, not parallel to its boundary.

        Curves are returned once each (unoriented), sorted by length then word.
        """
        periph = set(face_keys(self.tri))
        periph.update(unoriented_key(self.tri, c) for c in self.curves)
        found: Dict[Walk, Walk] = {}
        for walk in self.closed_walks(component, bound):
            word = reduce_walk(self.tri, walk)
            if len(word) != len(walk) or not is_primitive(word):
                continue
            key = unoriented_key(self.tri, word)
            if key in found or key in periph:
                continue
            if not is_simple(self.tri, word):
                continue
            found[key] = key
        return sorted(found, key=lambda w: (len(w), w))
