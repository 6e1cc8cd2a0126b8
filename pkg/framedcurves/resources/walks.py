"""Closed walks of darts and the normal coordinates they carry.

A curve is stored as a reduced cyclic word of darts.  Its normal coordinates
(number of times it crosses each triangulation edge) are the edge traversal
counts of that word, and ``trace_weights`` goes the other way: it draws a
normal multicurve from its weights and reads off one word per component.
"""
import logging
from collections import Counter
from typing import Dict, List, Sequence, Tuple

from framedcurves.errors import CurveError
from framedcurves.resources.triangulation import Triangulation, Walk

logger = logging.getLogger(__name__)


def is_closed_walk(tri: Triangulation, walk: Sequence[int]) -> bool:
    if not walk:
        return False
    m = len(walk)
    return all(tri.target(walk[k]) == tri.vertex_of[walk[(k + 1) % m]] for k in range(m))


def reduce_walk(tri: Triangulation, walk: Sequence[int]) -> Walk:
    """Free and cyclic reduction: cancel every dart followed by its twin."""
    stack: List[int] = []
    for d in walk:
        if stack and stack[-1] == tri.twin[d]:
            stack.pop()
        else:
            stack.append(d)
    start, end = 0, len(stack)
    while end - start >= 2 and stack[end - 1] == tri.twin[stack[start]]:
        start += 1
        end -= 1
    return tuple(stack[start:end])


def rotate_min(walk: Sequence[int]) -> Walk:
    """Lexicographically least rotation."""
    if not walk:
        return ()
    w = tuple(walk)
    return min(w[k:] + w[:k] for k in range(len(w)))


def rotate(walk: Sequence[int], k: int) -> Walk:
    w = tuple(walk)
    if not w:
        return w
    k %= len(w)
    return w[k:] + w[:k]


def inverse(tri: Triangulation, walk: Sequence[int]) -> Walk:
    return tuple(tri.twin[d] for d in reversed(walk))


def power(tri: Triangulation, walk: Sequence[int], k: int) -> Walk:
    if k >= 0:
        return tuple(walk) * k
    return inverse(tri, walk) * (-k)


def unoriented_key(tri: Triangulation, walk: Sequence[int]) -> Walk:
    return min(rotate_min(walk), rotate_min(inverse(tri, walk)))


def same_cycle(a: Sequence[int], b: Sequence[int]) -> bool:
    return len(a) == len(b) and rotate_min(a) == rotate_min(b)


def primitive_root(walk: Sequence[int]) -> Walk:
    w = tuple(walk)
    m = len(w)
    for p in range(1, m + 1):
        if m % p == 0 and w[:p] * (m // p) == w:
            return w[:p]
    return w


def is_primitive(walk: Sequence[int]) -> bool:
    return len(primitive_root(walk)) == len(walk)


def edge_weights(tri: Triangulation, walk: Sequence[int]) -> Tuple[int, ...]:
    counts = Counter(tri.edge_of[d] for d in walk)
    return tuple(counts.get(e, 0) for e in range(tri.n_edges))


def signed_counts(tri: Triangulation, walk: Sequence[int], edges: Sequence[int]) -> List[int]:
    """Signed traversal count of ``walk`` through each edge in ``edges``."""
    index = {e: k for k, e in enumerate(edges)}
    row = [0] * len(edges)
    for d in walk:
        k = index.get(tri.edge_of[d])
        if k is not None:
            row[k] += 1 if tri.is_canonical(d) else -1
    return row


def face_walk(tri: Triangulation, puncture: int) -> Walk:
    """Loop around a puncture, turning right so the surface is on the left."""
    return tri.faces[puncture]


def face_keys(tri: Triangulation) -> Dict[Walk, int]:
    return {unoriented_key(tri, f): p for p, f in enumerate(tri.faces)}


def peripheral_puncture(tri: Triangulation, walk: Sequence[int]) -> int:
    """Puncture index the walk goes around, or -1."""
    return face_keys(tri).get(unoriented_key(tri, walk), -1)


def add_weights(*vectors: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sum(col) for col in zip(*vectors))


def corner_counts(tri: Triangulation, weights: Sequence[int]) -> List[Tuple[int, int, int]]:
    """Per triangle, the number of normal arcs cutting off each corner.

    Corner ``i`` sits between the sides ``cycle[i]`` and ``cycle[i + 1]``.
    Raises ``CurveError`` if the matching conditions fail.
    """
    if len(weights) != tri.n_edges:
        raise CurveError(f"expected {tri.n_edges} weights, got {len(weights)}")
    if any(w < 0 for w in weights):
        raise CurveError("weights must be nonnegative")
    corners = []
    for v, cycle in enumerate(tri.vertices):
        w = [weights[tri.edge_of[d]] for d in cycle]
        if sum(w) % 2:
            raise CurveError(f"odd weight sum around triangle {v}")
        c = tuple((w[i] + w[(i + 1) % 3] - w[(i + 2) % 3]) // 2 for i in range(3))
        if min(c) < 0:
            raise CurveError(f"triangle inequality fails at triangle {v}: {w}")
        corners.append(c)
    return corners


def position_key(tri: Triangulation, weights: Sequence[int], dart: int, pos: int) -> Tuple[int, int]:
    e = tri.edge_of[dart]
    return (e, pos if tri.is_canonical(dart) else weights[e] - 1 - pos)


def next_crossing(
    tri: Triangulation,
    weights: Sequence[int],
    corners: Sequence[Tuple[int, int, int]],
    dart: int,
    pos: int,
) -> Tuple[int, int]:
    """Follow the strand leaving through ``dart`` at ``pos`` to its next exit."""
    entry = tri.twin[dart]
    w_entry = weights[tri.edge_of[entry]]
    p = w_entry - 1 - pos
    v = tri.vertex_of[entry]
    i = tri.slot[entry]
    cycle = tri.vertices[v]
    c_prev = corners[v][(i - 1) % 3]
    if p < c_prev:
        out = cycle[(i - 1) % 3]
        return out, weights[tri.edge_of[out]] - 1 - p
    out = cycle[(i + 1) % 3]
    return out, w_entry - 1 - p


class Strand:
    """One traced component: its word and where it starts."""

    __slots__ = ("walk", "positions")

    def __init__(self, walk: Walk, positions: Tuple[int, ...]):
        self.walk = walk
        self.positions = positions

    def __repr__(self) -> str:
        return f"Strand(walk={self.walk}, positions={self.positions})"


def trace_weights(tri: Triangulation, weights: Sequence[int]) -> List[Strand]:
    """Draw the normal multicurve with these weights and return its components.

    Parallel copies come back as separate strands.  Every strand starts on a
    canonical dart, and strands are produced in order of their starting
    (edge, position).
    """
    weights = tuple(weights)
    corners = corner_counts(tri, weights)
    seen = set()
    strands: List[Strand] = []
    for e, (d0, _) in enumerate(tri.edges):
        for p0 in range(weights[e]):
            if (e, p0) in seen:
                continue
            walk: List[int] = []
            positions: List[int] = []
            d, p = d0, p0
            while True:
                key = position_key(tri, weights, d, p)
                if key in seen:
                    break
                seen.add(key)
                walk.append(d)
                positions.append(p)
                d, p = next_crossing(tri, weights, corners, d, p)
            strands.append(Strand(tuple(walk), tuple(positions)))
    logger.debug("traced %d strands from weights %s", len(strands), weights)
    return strands


def walk_positions(tri: Triangulation, weights: Sequence[int], walk: Sequence[int]) -> Tuple[int, ...]:
    """Positions of the strand of ``weights`` that follows ``walk`` from its start.

    ``walk`` must be a component of the normal multicurve with these weights.
    """
    target = rotate_min(walk)
    for strand in trace_weights(tri, weights):
        if len(strand.walk) != len(walk) or rotate_min(strand.walk) != target:
            continue
        m = len(walk)
        for k in range(m):
            if rotate(strand.walk, k) == tuple(walk):
                return rotate(strand.positions, k)
    raise CurveError("walk is not a component of the given multicurve")


def commutator(tri: Triangulation, x: Sequence[int], y: Sequence[int]) -> Walk:
    """x y x^-1 y^-1 for two loops based at the same vertex, reduced."""
    return reduce_walk(tri, tuple(x) + tuple(y) + inverse(tri, x) + inverse(tri, y))


def based_at(tri: Triangulation, walk: Sequence[int], vertex: int) -> List[int]:
    """Indices where ``walk`` leaves ``vertex``."""
    return [k for k, d in enumerate(walk) if tri.vertex_of[d] == vertex]
