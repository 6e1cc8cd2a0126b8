"""Crossing arrangements of several curves, and the boundary of their neighborhood.

An arrangement places every crossing (and every endpoint of an attached arc)
at a definite spot along each curve through it.  That cuts each curve into
sub-arcs whose dart words are known, and turns the union of the curves and
arcs into a ribbon graph.  The boundary of a regular neighborhood of the
union is then read off as the face cycles of that ribbon graph.
"""
import logging
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from framedcurves.errors import CurveError
from framedcurves.resources.crossings import crossings, left_of
from framedcurves.resources.triangulation import Triangulation, Walk
from framedcurves.resources.walks import inverse, reduce_walk

logger = logging.getLogger(__name__)

# groups of points sharing a dart index along a curve, in the order met
ARRIVING, ATTACHED, LEAVING = 0, 1, 2


@dataclass(frozen=True)
class ArcPiece:
    """An arc between two of the curves; endpoints are (curve, index, side)."""

    word: Walk
    start: Tuple[int, int, str]
    end: Tuple[int, int, str]


@dataclass
class Point:
    kind: str
    curves: Tuple[int, ...]
    sign: int = 0
    side: str = ""
    arc: int = -1
    arc_end: int = 0


class Arrangement:
    def __init__(self, tri: Triangulation, curves: Sequence[Walk], arcs: Sequence[ArcPiece] = ()):
        self.tri = tri
        self.curves: Tuple[Walk, ...] = tuple(tuple(c) for c in curves)
        self.arcs: Tuple[ArcPiece, ...] = tuple(arcs)
        self.points: List[Point] = []
        entries: Dict[int, List[Tuple[int, int, int, Optional[Walk], int]]] = {
            c: [] for c in range(len(self.curves))
        }
        for p in range(len(self.curves)):
            for q in range(p + 1, len(self.curves)):
                first, second = self.curves[p], self.curves[q]
                inv_first = inverse(tri, first)
                inv_second = inverse(tri, second)
                for x in crossings(tri, first, second):
                    pid = len(self.points)
                    self.points.append(Point("cross", (p, q), sign=x.sign))
                    oriented = second if x.direction > 0 else inv_second
                    entries[p].append((x.first_index, LEAVING, pid, oriented, x.strand_index))
                    if x.direction > 0:
                        entries[q].append((x.second_index, LEAVING, pid, first, x.first_index))
                    else:
                        strand = len(first) - 1 - x.first_index
                        entries[q].append((x.second_index, ARRIVING, pid, inv_first, strand))
        for a, arc in enumerate(self.arcs):
            for end, (c, k, side) in enumerate((arc.start, arc.end)):
                pid = len(self.points)
                self.points.append(Point("end", (c,), side=side, arc=a, arc_end=end))
                entries[c].append((k % len(self.curves[c]), ATTACHED, pid, None, 0))

        self.order: Dict[int, List[int]] = {}
        self.index_of: Dict[int, List[int]] = {}
        self.slot: Dict[Tuple[int, int], int] = {}
        for c, items in entries.items():
            ordered = self._sort_along(c, items)
            self.order[c] = [pid for _, pid in ordered]
            self.index_of[c] = [k for k, _ in ordered]
            for t, pid in enumerate(self.order[c]):
                self.slot[(c, pid)] = t

    def _sort_along(self, c: int, items) -> List[Tuple[int, int]]:
        tri = self.tri
        curve = self.curves[c]
        groups: Dict[Tuple[int, int], list] = {}
        for k, group, pid, strand, idx in items:
            groups.setdefault((k, group), []).append((pid, strand, idx))
        ordered: List[Tuple[int, int]] = []
        for (k, group) in sorted(groups):
            members = groups[(k, group)]
            if len(members) > 1 and group != ATTACHED:
                _, strand0, idx0 = members[0]
                if group == LEAVING:
                    third = tri.twin[strand0[idx0 - 1]]
                    leftmost = third != tri.sigma[curve[k]]
                else:
                    third = strand0[(idx0 + 1) % len(strand0)]
                    leftmost = third == tri.sigma_inv[tri.twin[curve[k - 1]]]

                def compare(x, y, leftmost=leftmost):
                    x_left = left_of(tri, x[1], x[2], y[1], y[2])
                    if leftmost:
                        return -1 if x_left else 1
                    return 1 if x_left else -1

                members = sorted(members, key=cmp_to_key(compare))
            ordered.extend((k, pid) for pid, _, _ in members)
        return ordered

    def subarc(self, c: int, t: int) -> Walk:
        """Darts of curve ``c`` from its point ``t`` to the next one."""
        curve = self.curves[c]
        idx = self.index_of[c]
        count = len(idx)
        m = len(curve)
        if t == count - 1:
            length = (idx[0] - idx[t]) % m or m
        else:
            length = idx[t + 1] - idx[t]
        return tuple(curve[(idx[t] + s) % m] for s in range(length))

    def path_along(self, c: int, t_from: int, t_to: int, forward: bool = True) -> List[Walk]:
        """Words running along curve ``c`` between two of its points.

        When the two points coincide both the empty word and the full loop
        are returned.
        """
        count = len(self.order[c])
        if not forward:
            return [inverse(self.tri, w) for w in self.path_along(c, t_to, t_from, True)]
        if t_from == t_to:
            return [(), self.curves[c]]
        word: List[int] = []
        t = t_from
        while t != t_to:
            word.extend(self.subarc(c, t))
            t = (t + 1) % count
        return [tuple(word)]

    def is_connected(self) -> bool:
        graph = nx.Graph()
        graph.add_nodes_from(("curve", c) for c in range(len(self.curves)))
        graph.add_nodes_from(("arc", a) for a in range(len(self.arcs)))
        for point in self.points:
            if point.kind == "cross":
                graph.add_edge(("curve", point.curves[0]), ("curve", point.curves[1]))
            else:
                graph.add_edge(("curve", point.curves[0]), ("arc", point.arc))
        return graph.number_of_nodes() > 0 and nx.is_connected(graph)

    def boundary_words(self) -> List[Walk]:
        """Reduced words of the boundary circles of a regular neighborhood."""
        if not self.is_connected():
            raise CurveError("pieces do not form a connected union")
        if not self.points:
            if len(self.curves) != 1:
                raise CurveError("pieces do not form a connected union")
            curve = self.curves[0]
            return [curve, inverse(self.tri, curve)]

        words: List[Walk] = []
        ends_at: Dict[int, List[Tuple[int, int]]] = {}
        edge_words: List[Walk] = []

        def new_edge(word: Walk) -> int:
            edge_words.append(word)
            return len(edge_words) - 1

        curve_edge: Dict[Tuple[int, int], int] = {}
        for c in range(len(self.curves)):
            for t in range(len(self.order[c])):
                curve_edge[(c, t)] = new_edge(self.subarc(c, t))
        arc_edge = [new_edge(arc.word) for arc in self.arcs]

        def out_end(c: int, pid: int) -> Tuple[int, int]:
            return (curve_edge[(c, self.slot[(c, pid)])], 0)

        def in_end(c: int, pid: int) -> Tuple[int, int]:
            t = self.slot[(c, pid)]
            count = len(self.order[c])
            return (curve_edge[(c, (t - 1) % count)], 1)

        for pid, point in enumerate(self.points):
            if point.kind == "cross":
                p, q = point.curves
                if point.sign > 0:
                    ring = [out_end(p, pid), out_end(q, pid), in_end(p, pid), in_end(q, pid)]
                else:
                    ring = [out_end(p, pid), in_end(q, pid), in_end(p, pid), out_end(q, pid)]
            else:
                (c,) = point.curves
                attach = (arc_edge[point.arc], point.arc_end)
                if point.side == "left":
                    ring = [out_end(c, pid), attach, in_end(c, pid)]
                else:
                    ring = [out_end(c, pid), in_end(c, pid), attach]
            ends_at[pid] = ring

        rotation: Dict[Tuple[int, int], Tuple[int, int]] = {}
        for ring in ends_at.values():
            for k, end in enumerate(ring):
                rotation[end] = ring[(k + 1) % len(ring)]

        seen = set()
        for start in sorted(rotation):
            if start in seen:
                continue
            word: List[int] = []
            end = start
            while end not in seen:
                seen.add(end)
                edge, side = end
                word.extend(edge_words[edge] if side == 0 else inverse(self.tri, edge_words[edge]))
                end = rotation[(edge, 1 - side)]
            words.append(reduce_walk(self.tri, word))
        logger.debug("neighborhood of %d curves and %d arcs has %d boundary circles", len(self.curves), len(self.arcs), len(words))
        return words
