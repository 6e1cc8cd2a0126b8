"""Ideal triangulations of punctured surfaces, stored as trivalent fat graphs.

The dual of an ideal triangulation is a trivalent ribbon graph: one vertex per
triangle, one edge per triangulation edge.  Darts are the half-edges of that
graph.  Three permutations describe everything:

* ``twin``   pairs the two darts of an edge,
* ``sigma``  rotates counterclockwise around a vertex (a triangle's sides),
* ``face``   is ``sigma o twin``; its cycles run once around each puncture
  with the surface on their left.

A dart ``d`` is read as "leave the triangle ``vertex_of[d]`` through its side
``d``".  Closed walks of darts are the combinatorial curves used everywhere
else in the package.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

from framedcurves.errors import SurfaceError

logger = logging.getLogger(__name__)

Walk = Tuple[int, ...]


@dataclass(frozen=True)
class SurfaceType:
    genus: int
    punctures: int

    @property
    def complexity(self) -> int:
        return 3 * self.genus - 3 + self.punctures

    @property
    def euler(self) -> int:
        return 2 - 2 * self.genus - self.punctures

    def as_dict(self) -> Dict[str, int]:
        return {"g": self.genus, "n": self.punctures}


class Triangulation:
    """Fat graph dual to an ideal triangulation of S_{g,n}."""

    __slots__ = (
        "surface",
        "twin",
        "sigma",
        "sigma_inv",
        "vertex_of",
        "slot",
        "vertices",
        "edge_of",
        "edges",
        "face_of",
        "faces",
        "tree_edges",
        "gsb",
    )

    def __init__(
        self,
        surface: SurfaceType,
        twin: List[int],
        vertices: List[Tuple[int, int, int]],
        tree_edges: List[Tuple[int, int]],
    ):
        self.surface = surface
        n = len(twin)
        self.twin = tuple(twin)
        sigma = [0] * n
        vertex_of = [0] * n
        slot = [0] * n
        for v, cycle in enumerate(vertices):
            if len(cycle) != 3:
                raise SurfaceError(f"vertex {v} is not trivalent")
            for j, d in enumerate(cycle):
                sigma[d] = cycle[(j + 1) % 3]
                vertex_of[d] = v
                slot[d] = j
        self.sigma = tuple(sigma)
        sigma_inv = [0] * n
        for d in range(n):
            sigma_inv[sigma[d]] = d
        self.sigma_inv = tuple(sigma_inv)
        self.vertex_of = tuple(vertex_of)
        self.slot = tuple(slot)
        self.vertices = tuple(tuple(c) for c in vertices)

        canonical = sorted(d for d in range(n) if d < twin[d])
        edge_of = [0] * n
        for e, d in enumerate(canonical):
            edge_of[d] = e
            edge_of[twin[d]] = e
        self.edge_of = tuple(edge_of)
        self.edges = tuple((d, twin[d]) for d in canonical)
        self.tree_edges = frozenset(edge_of[d] for d, _ in tree_edges)

        face_of = [-1] * n
        faces = []
        for start in range(n):
            if face_of[start] >= 0:
                continue
            orbit = []
            d = start
            while face_of[d] < 0:
                face_of[d] = len(faces)
                orbit.append(d)
                d = sigma[twin[d]]
            faces.append(tuple(orbit))
        self.face_of = tuple(face_of)
        self.faces = tuple(faces)
        self.gsb: Tuple[Walk, ...] = ()

    @property
    def n_darts(self) -> int:
        return len(self.twin)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_triangles(self) -> int:
        return len(self.vertices)

    @property
    def genus(self) -> int:
        return self.surface.genus

    @property
    def punctures(self) -> int:
        return self.surface.punctures

    def is_canonical(self, d: int) -> bool:
        return d < self.twin[d]

    def target(self, d: int) -> int:
        """Vertex (triangle) entered when traversing dart ``d``."""
        return self.vertex_of[self.twin[d]]

    def third(self, a: int, b: int) -> int:
        """The dart at a vertex that is neither ``a`` nor ``b``."""
        c = self.sigma[a]
        return c if c != b else self.sigma[c]

    def turns_left(self, incoming: int, outgoing: int) -> bool:
        """Whether a walk arriving through ``incoming`` (a dart at the vertex,
        the one it entered by) and leaving by ``outgoing`` turns left."""
        return outgoing == self.sigma_inv[incoming]

    def same_surface(self, other: "Triangulation") -> bool:
        return self.surface == other.surface

    def __repr__(self) -> str:
        return (
            f"Triangulation(g={self.genus}, n={self.punctures}, "
            f"triangles={self.n_triangles}, edges={self.n_edges})"
        )


def _tree_path(v_from: int, v_to: int, rose_darts: int) -> List[int]:
    """Darts of the blown-up path tree going from vertex ``v_from`` to ``v_to``."""
    path = []
    if v_from < v_to:
        for j in range(v_from, v_to):
            path.append(rose_darts + 2 * j)
    else:
        for j in range(v_from - 1, v_to - 1, -1):
            path.append(rose_darts + 2 * j + 1)
    return path


@lru_cache(maxsize=None)
def canonical_triangulation(g: int, n: int) -> Triangulation:
    """Deterministic ideal triangulation of S_{g,n} with a stored GSB.

    Built from the one-vertex rose x_1 y_1 X_1 Y_1 ... p_1 P_1 ... (genus
    blocks, then n-1 puncture loops) by blowing its vertex up into a path of
    trivalent vertices.
    """
    if g < 0 or n < 1:
        raise SurfaceError(f"need g >= 0 and n >= 1, got g={g}, n={n}")
    if 2 - 2 * g - n >= 0:
        raise SurfaceError(f"S_{{{g},{n}}} has euler characteristic {2 - 2 * g - n} >= 0")

    rose = 4 * g + 2 * n - 2
    n_vertices = rose - 2
    twin = [0] * (3 * rose - 6)
    for i in range(g):
        for a, b in ((4 * i, 4 * i + 2), (4 * i + 1, 4 * i + 3)):
            twin[a], twin[b] = b, a
    for j in range(n - 1):
        a, b = 4 * g + 2 * j, 4 * g + 2 * j + 1
        twin[a], twin[b] = b, a
    tree = []
    for j in range(n_vertices - 1):
        r, l = rose + 2 * j, rose + 2 * j + 1
        twin[r], twin[l] = l, r
        tree.append((r, l))

    def right(j: int) -> int:
        return rose + 2 * j

    def left(j: int) -> int:
        return rose + 2 * j + 1

    last = n_vertices - 1
    vertices = [(right(0), 0, 1)]
    for j in range(1, last):
        vertices.append((right(j), left(j - 1), j + 1))
    vertices.append((rose - 1, left(last - 1), rose - 2))

    tri = Triangulation(SurfaceType(g, n), twin, vertices, tree)
    if len(tri.faces) != n:
        raise SurfaceError(f"built {len(tri.faces)} punctures instead of {n}")

    def home(k: int) -> int:
        return min(max(k - 1, 0), last)

    gsb: List[Walk] = []
    for i in range(g):
        for k in (4 * i, 4 * i + 1):
            walk = [k] + _tree_path(home(twin[k]), home(k), rose)
            gsb.append(tuple(walk))

    # orient every b_i so that <a_i, b_i> = +1
    from framedcurves.resources.crossings import algebraic_intersection_walks
    from framedcurves.resources.walks import inverse

    tri.gsb = tuple(gsb)
    oriented: List[Walk] = []
    for i in range(g):
        a, b = gsb[2 * i], gsb[2 * i + 1]
        if algebraic_intersection_walks(tri, a, b) < 0:
            b = inverse(tri, b)
        oriented.extend((a, b))
    tri.gsb = tuple(oriented)
    logger.debug("built %r", tri)
    return tri
