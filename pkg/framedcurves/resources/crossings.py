"""Crossings between reduced cyclic walks on a trivalent ribbon graph.

Two reduced cyclic words share maximal common segments (one word read
forwards against the other read forwards or backwards).  A segment is a
crossing exactly when the two strands enter it from one side and leave it
towards the other; counting those gives the geometric intersection number
of the curves the words represent.

Every crossing is placed just after the vertex where the segment starts,
read along the *first* walk.  That placement is what the twist and surgery
code relies on when it splices loops into the second walk.
"""
import logging
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Dict, Iterator, List, Sequence, Tuple

from framedcurves.errors import CurveError
from framedcurves.resources.triangulation import Triangulation, Walk
from framedcurves.resources.walks import (
    inverse,
    is_primitive,
    power,
    reduce_walk,
    rotate,
    same_cycle,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Crossing:
    first_index: int
    second_index: int
    direction: int
    sign: int
    length: int
    strand_index: int


def _positions(walk: Sequence[int]) -> Dict[int, List[int]]:
    table: Dict[int, List[int]] = {}
    for k, d in enumerate(walk):
        table.setdefault(d, []).append(k)
    return table


def _segments(tri: Triangulation, a: Walk, b: Walk, direction: int) -> Iterator[Crossing]:
    m, n = len(a), len(b)
    other = b if direction > 0 else inverse(tri, b)
    where = _positions(other)
    cap = m + n
    for i in range(m):
        for j in where.get(a[i], ()):
            if a[i - 1] == other[j - 1]:
                continue
            length = 1
            while length < cap and a[(i + length) % m] == other[(j + length) % n]:
                length += 1
            if length >= cap:
                continue
            left_start = tri.twin[a[i - 1]] == tri.sigma[a[i]]
            last = a[(i + length - 1) % m]
            left_end = a[(i + length) % m] == tri.sigma_inv[tri.twin[last]]
            if left_start == left_end:
                continue
            sign = direction * (1 if left_start else -1)
            second = j if direction > 0 else (n - j) % n
            yield Crossing(i, second, direction, sign, length, j)


def crossings(tri: Triangulation, first: Walk, second: Walk) -> List[Crossing]:
    """All crossings of two walks, in order of the first walk's segment starts.

    Words of the same curve (either orientation) never cross.
    """
    if not first or not second:
        return []
    if same_cycle(first, second) or same_cycle(first, inverse(tri, second)):
        return []
    found = list(_segments(tri, first, second, 1)) + list(_segments(tri, first, second, -1))
    found.sort(key=lambda c: (c.first_index, c.direction, c.strand_index))
    return found


def intersection_walks(tri: Triangulation, first: Walk, second: Walk) -> int:
    return len(crossings(tri, first, second))


def algebraic_intersection_walks(tri: Triangulation, first: Walk, second: Walk) -> int:
    return sum(c.sign for c in crossings(tri, first, second))


def self_crossing_count(tri: Triangulation, walk: Walk) -> int:
    """Number of transverse self-intersections (each double point once)."""
    same = sum(1 for _ in _segments(tri, walk, walk, 1))
    opposite = sum(1 for _ in _segments(tri, walk, walk, -1))
    return (same + opposite) // 2


def is_simple(tri: Triangulation, walk: Walk) -> bool:
    if not walk or not is_primitive(walk):
        return False
    for _ in _segments(tri, walk, walk, 1):
        return False
    for _ in _segments(tri, walk, walk, -1):
        return False
    return True


def left_of(tri: Triangulation, w1: Walk, k1: int, w2: Walk, k2: int) -> bool:
    """Whether strand (w1, k1) runs to the left of strand (w2, k2).

    Both strands must leave the same vertex through the same dart.
    """
    m1, m2 = len(w1), len(w2)
    cap = m1 + m2
    for t in range(1, cap):
        a, b = w1[(k1 + t) % m1], w2[(k2 + t) % m2]
        if a != b:
            entry = tri.twin[w1[(k1 + t - 1) % m1]]
            return a == tri.sigma_inv[entry]
    for t in range(1, cap):
        a, b = w1[(k1 - t) % m1], w2[(k2 - t) % m2]
        if a != b:
            out = w1[(k1 - t + 1) % m1]
            return tri.twin[a] == tri.sigma[out]
    raise CurveError("strands coincide; cannot order them")


def _band_sort(tri: Triangulation, strands: List[Tuple[Walk, int]], leftmost_first: bool) -> List[int]:
    """Indices of ``strands`` sorted across their common band."""

    def compare(x: int, y: int) -> int:
        wx, kx = strands[x]
        wy, ky = strands[y]
        x_left = left_of(tri, wx, kx, wy, ky)
        if leftmost_first:
            return -1 if x_left else 1
        return 1 if x_left else -1

    return sorted(range(len(strands)), key=cmp_to_key(compare))


def order_along_first(
    tri: Triangulation, first: Walk, found: Sequence[Tuple[Crossing, Walk]]
) -> List[int]:
    """Order crossings of ``first`` with several walks as met along ``first``.

    ``found`` holds (crossing, second walk) pairs; returns indices into it.
    """
    groups: Dict[int, List[int]] = {}
    for idx, (c, _) in enumerate(found):
        groups.setdefault(c.first_index, []).append(idx)
    order: List[int] = []
    for ip in sorted(groups):
        members = groups[ip]
        if len(members) > 1:
            out = first[ip]
            strands = []
            for idx in members:
                c, second = found[idx]
                oriented = second if c.direction > 0 else inverse(tri, second)
                strands.append((oriented, c.strand_index))
            c0, second0 = found[members[0]]
            oriented0 = second0 if c0.direction > 0 else inverse(tri, second0)
            third = tri.twin[oriented0[c0.strand_index - 1]]
            ranked = _band_sort(tri, strands, leftmost_first=third != tri.sigma[out])
            members = [members[r] for r in ranked]
        order.extend(members)
    return order


def order_along_second(tri: Triangulation, first: Walk, second: Walk, found: Sequence[Crossing]) -> List[int]:
    """Order crossings of ``first`` with ``second`` as met along ``second``."""
    m = len(first)
    inv_first = inverse(tri, first)
    groups: Dict[Tuple[int, int], List[int]] = {}
    for idx, c in enumerate(found):
        groups.setdefault((c.second_index, 0 if c.direction < 0 else 1), []).append(idx)
    order: List[int] = []
    for key in sorted(groups):
        members = groups[key]
        w, group = key
        if len(members) > 1:
            if group == 0:
                strands = [(inv_first, m - 1 - found[i].first_index) for i in members]
                entry = tri.twin[second[w - 1]]
                ip = found[members[0]].first_index
                third = tri.twin[first[ip - 1]]
                leftmost = third == tri.sigma_inv[entry]
            else:
                strands = [(first, found[i].first_index) for i in members]
                out = second[w]
                ip = found[members[0]].first_index
                third = tri.twin[first[ip - 1]]
                leftmost = third != tri.sigma[out]
            ranked = _band_sort(tri, strands, leftmost_first=leftmost)
            members = [members[r] for r in ranked]
        order.extend(members)
    return order


def twist_walk(tri: Triangulation, target: Walk, about: Walk, k: int) -> Walk:
    """Word of T_about^k(target): splice ``about`` into ``target`` at every crossing.

    The loop spliced at a crossing is traversed k times in the direction
    given by the local sign of <target, about>, so homology moves by
    k * <target, about> * [about].
    """
    if k == 0 or not target:
        return target
    found = crossings(tri, about, target)
    if not found:
        return target
    order = order_along_second(tri, about, target, found)
    inserts: Dict[int, List[int]] = {}
    for idx in order:
        inserts.setdefault(found[idx].second_index, []).append(idx)
    word: List[int] = []
    for w, d in enumerate(target):
        for idx in inserts.get(w, ()):
            c = found[idx]
            loop = rotate(about, c.first_index)
            word.extend(power(tri, loop, -c.sign * k))
        word.append(d)
    result = reduce_walk(tri, word)
    logger.debug("twist of length-%d word about length-%d word: length %d", len(target), len(about), len(result))
    return result
