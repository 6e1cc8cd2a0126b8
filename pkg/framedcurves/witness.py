"""Admissible curves and the witnesses of the admissible curve graph.

A piece W of the cut along a multicurve is a witness when every admissible
curve has to meet it.  On a genus-0 piece of the complement, homological
coherence turns "contains a winding-0 curve" into a subset-sum condition on
the windings of its boundary circles, which is what ``wn0_subset_exists``
decides.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx

from framedcurves.errors import CurveError, EnumerationBoundError, WitnessError
from framedcurves.framing import (
    Framing,
    boundary_winding,
    framing_from_gsb,
    invariants,
    winding_of_walk,
)
from framedcurves.resources.arrangement import ArcPiece
from framedcurves.resources.drawing import LEFT, RIGHT
from framedcurves.resources.triangulation import Walk
from framedcurves.resources.walks import inverse, same_cycle, unoriented_key
from framedcurves.surface_core import (
    NormalArcSystem,
    TOTAL_BOUND,
    NormalMulticurve,
    canonical_triangulation,
    cut,
    drawing_of,
    enumerate_multicurves,
    multicurve_of,
    neighborhood_boundary,
    search_in_component,
    subsurfaces_overlap,
    topological_type,
)
from framedcurves.telemetry.setup_telemetry import traceFunction

logger = logging.getLogger(__name__)


def is_admissible(phi: Framing, c: NormalMulticurve) -> bool:
    """Nonseparating with winding number zero."""
    word = c.require_single()
    kind = topological_type(c)
    if kind.peripheral:
        raise CurveError("peripheral curves are never admissible vertices")
    return not kind.separating and winding_of_walk(phi, word) == 0


@dataclass(frozen=True)
class SubsetResult:
    found: bool
    subset: Tuple[int, ...] = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.found


def wn0_subset_exists(windings: Sequence[int], split: Optional[Set[int]] = None) -> SubsetResult:
    """Look for I with 2 <= |I| <= k-2 and sum of windings over I equal to 1 - |I|.

    Windings belong to the circles of a genus-0 piece, oriented with the
    piece on their left.  ``split`` lists circle indices of which both I and
    its complement must contain one.
    """
    k = len(windings)
    if k < 4:
        return SubsetResult(False, reason="no nonperipheral curves")
    for size in range(2, k - 1):
        for subset in combinations(range(k), size):
            if sum(windings[i] for i in subset) != 1 - size:
                continue
            if split is not None:
                inside = set(subset)
                if not (split & inside) or not (split - inside):
                    continue
            return SubsetResult(True, subset, "winding-0 curve cuts off the subset")
    return SubsetResult(False, reason="no subset has the winding of a winding-0 curve")


@dataclass(frozen=True)
class WitnessQuery:
    gamma: NormalMulticurve
    component: int
    framing: Framing


@dataclass(frozen=True)
class ComplementPiece:
    """A component of S minus W, glued from pieces of the cut."""

    pieces: Tuple[int, ...]
    euler: int
    circles: int
    windings: Tuple[int, ...]
    rim: Tuple[bool, ...]

    @property
    def genus(self) -> int:
        return (2 - self.euler - self.circles) // 2


@dataclass(frozen=True)
class WitnessVerdict:
    ok: bool
    reason: str
    clauses: Tuple[Dict, ...] = field(default=(), compare=False)

    def __bool__(self) -> bool:
        return self.ok


def complement_pieces(phi: Framing, gamma: NormalMulticurve, component: int) -> List[ComplementPiece]:
    """Components of the complement of one piece, with their windings."""
    decomposition = cut(gamma)
    decomposition.component(component)
    graph = nx.MultiGraph()
    others = [c.index for c in decomposition.components if c.index != component]
    graph.add_nodes_from(others)
    for j, (left, right) in enumerate(decomposition.curve_sides):
        if component not in (left, right):
            graph.add_edge(left, right, key=j)
    result: List[ComplementPiece] = []
    for members in sorted((sorted(m) for m in nx.connected_components(graph)), key=lambda m: m[0]):
        euler = 0
        windings: List[int] = []
        rim: List[bool] = []
        for idx in members:
            data = decomposition.components[idx]
            euler += data.euler
            for j, side in data.boundary:
                if component in decomposition.curve_sides[j]:
                    windings.append(boundary_winding(phi, gamma, j, side))
                    rim.append(True)
            for p in data.punctures:
                windings.append(phi.signature[p])
                rim.append(False)
        result.append(ComplementPiece(tuple(members), euler, len(windings), tuple(windings), tuple(rim)))
    # a curve with W on both sides leaves an annulus behind
    for j, (left, right) in enumerate(decomposition.curve_sides):
        if left == right == component:
            value = winding_of_walk(phi, gamma.components[j])
            result.append(ComplementPiece((), 0, 2, (value, -value), (True, True)))
    return result


def is_witness(query: WitnessQuery) -> WitnessVerdict:
    """Whether every admissible curve must meet the piece; the reason names the first failing clause."""
    gamma, w, phi = query.gamma, query.component, query.framing
    if gamma.surface != phi.surface:
        raise WitnessError("multicurve and framing live on different surfaces")
    if phi.genus < 3:
        raise WitnessError(f"witness criterion needs genus at least 3, got {phi.genus}")
    decomposition = cut(gamma)
    try:
        data = decomposition.component(w)
    except CurveError as e:
        raise WitnessError(str(e)) from e
    clauses: List[Dict] = []

    proper = not gamma.is_empty() and data.xi >= 1
    clauses.append({"clause": "proper", "passed": proper, "xi": data.xi})
    if not proper:
        return WitnessVerdict(False, "witness must be a proper subsurface with positive complexity", tuple(clauses))

    rim_curves = sorted({j for j, _ in data.boundary})
    admissible = [j for j in rim_curves if is_admissible(phi, gamma.curve(j))]
    clauses.append({"clause": "boundary_not_admissible", "passed": not admissible, "admissible": admissible})
    if admissible:
        return WitnessVerdict(False, "a boundary curve is admissible", tuple(clauses))

    outside = complement_pieces(phi, gamma, w)
    genera = [z.genus for z in outside]
    has_genus = any(g > 0 for g in genera)
    clauses.append({"clause": "complement_genus_zero", "passed": not has_genus, "genera": genera})
    if has_genus:
        return WitnessVerdict(False, "complement has genus, contains admissible curve", tuple(clauses))

    for z in outside:
        split = {i for i, on_rim in enumerate(z.rim) if on_rim}
        found = wn0_subset_exists(z.windings, split)
        clauses.append(
            {
                "clause": "no_admissible_in_complement",
                "passed": not found.found,
                "windings": list(z.windings),
                "subset": list(found.subset),
            }
        )
        if found:
            return WitnessVerdict(False, "complement contains an admissible curve", tuple(clauses))
    return WitnessVerdict(True, "witness", tuple(clauses))


def witness_components(phi: Framing, gamma: NormalMulticurve) -> List[int]:
    return [c.index for c in cut(gamma).components if is_witness(WitnessQuery(gamma, c.index, phi))]


def is_k_vertex(phi: Framing, gamma: NormalMulticurve) -> bool:
    """A nonempty multicurve none of whose complementary pieces is a witness."""
    return not gamma.is_empty() and not witness_components(phi, gamma)


def find_admissible_in(
    phi: Framing, gamma: NormalMulticurve, component: int, start_bound: int = 4, max_bound: int = 24
) -> NormalMulticurve:
    """An admissible curve inside one piece of the cut (pieces with genus always have one)."""
    curve, bound = search_in_component(gamma, component, lambda c: is_admissible(phi, c), start_bound, max_bound)
    if curve is None:
        raise EnumerationBoundError("no admissible curve found in the piece", bound)
    return curve


@dataclass(frozen=True)
class FlatCertificate:
    """Two disjoint witnesses cut out by g+1 curves, with the framing that makes them so."""

    framing: Framing
    alpha: NormalMulticurve
    curves: Tuple[Walk, ...]
    w_plus: int
    w_minus: int
    x: Tuple[int, ...]
    positive_punctures: Tuple[int, ...]
    transcripts: Dict[str, Tuple[Dict, ...]] = field(default_factory=dict, compare=False)

    def to_dict(self) -> Dict:
        surface = self.framing.surface
        return {
            "kind": "flat_certificate",
            "surface": surface.as_dict(),
            "framing": self.framing.to_dict(),
            "alpha": self.alpha.to_dict(),
            "curves": [list(c) for c in self.curves],
            "w_plus": self.w_plus,
            "w_minus": self.w_minus,
            "x": list(self.x),
            "positive_punctures": list(self.positive_punctures),
            "transcripts": {k: list(v) for k, v in self.transcripts.items()},
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "FlatCertificate":
        if data.get("kind") != "flat_certificate":
            raise WitnessError("record is not a flat certificate")
        framing = Framing.from_dict(data["framing"])
        alpha = NormalMulticurve.from_dict(data["alpha"])
        return cls(
            framing=framing,
            alpha=alpha,
            curves=tuple(tuple(int(d) for d in c) for c in data["curves"]),
            w_plus=int(data["w_plus"]),
            w_minus=int(data["w_minus"]),
            x=tuple(int(v) for v in data["x"]),
            positive_punctures=tuple(int(p) for p in data["positive_punctures"]),
            transcripts={k: tuple(v) for k, v in data.get("transcripts", {}).items()},
        )


def _attach_arc(drawing, host: int, host_side: str, target: Tuple[str, int, int, str]) -> ArcPiece:
    """Arc in the cut surface from ``host`` (on ``host_side``) to the second curve of a pair.

    ``target`` is (kind, piece, index, side): the piece the arc ends in, and
    where it lands on the second curve.
    """
    left, right = drawing.side_pieces(host, 0)
    start_piece = left if host_side == LEFT else right
    _, end_piece, index, side = target
    path = drawing.path_darts(start_piece, end_piece)
    if path is None:
        raise WitnessError("target circle is not reachable from the host curve")
    return ArcPiece(word=path, start=(0, 0, host_side), end=(1, index, side))


def _puncture_corner(tri, puncture: int) -> Tuple[int, int, int]:
    """A triangle corner at the puncture and the index of the face walk leaving there."""
    face = tri.faces[puncture]
    for v, cycle in enumerate(tri.vertices):
        for i in range(3):
            out = cycle[(i + 1) % 3]
            if tri.face_of[out] == puncture:
                return v, i, face.index(out)
    raise WitnessError(f"puncture {puncture} has no corner")


def cut_off_circles(
    gamma: NormalMulticurve, sides: Sequence[Tuple[int, str]], punctures: Sequence[int]
) -> NormalMulticurve:
    """A curve cutting off the chosen sides of some curves of ``gamma`` together with some punctures.

    Built by repeated band sums inside the piece that holds all of them: each
    round joins the current curve to the next circle by an arc and keeps the
    new outer boundary of the neighborhood.
    """
    tri = gamma.tri
    targets = [("curve", j, side) for j, side in sides] + [("puncture", p, LEFT) for p in punctures]
    if len(targets) < 2 or targets[0][0] != "curve":
        raise WitnessError("need a curve and at least one more circle to cut off")
    known = set(gamma.components)
    current: Walk = gamma.components[targets[0][1]]
    for kind, payload, target_side in targets[1:]:
        fresh_curve = current not in known
        drawn = gamma.union(multicurve_of(tri, [current])) if fresh_curve else gamma
        drawing = drawing_of(tri, drawn.components)
        host = drawn.components.index(current)
        if kind == "curve":
            other = gamma.components[payload]
            j = drawn.components.index(other)
            left, right = drawing.side_pieces(j, 0)
            end_piece = left if target_side == LEFT else right
            target = (kind, end_piece, 0, target_side)
            pair = [current, other]
        else:
            v, i, k = _puncture_corner(tri, payload)
            end_piece = drawing.corner_piece(v, i)
            target = (kind, end_piece, k, LEFT)
            pair = [current, tri.faces[payload]]
        if fresh_curve:
            left_comp, _ = drawing.curve_sides[host]
            side = LEFT if left_comp == drawing.component_of[end_piece] else RIGHT
        else:
            side = targets[0][2]
        arc = _attach_arc(drawing, host, side, target)
        system = NormalArcSystem(tri.surface, tuple(pair), (arc,))
        boundary, _ = neighborhood_boundary(pair, system, tri)
        fresh = [w for w in boundary.components if w not in known and w != current]
        if len(fresh) != 1:
            raise WitnessError(f"band sum produced {len(fresh)} new curves")
        current = fresh[0]
    return multicurve_of(tri, [current])


def stored_side(tri, key: Walk, word: Walk, side: str) -> str:
    """The side of the stored key corresponding to ``side`` of the oriented ``word``."""
    if same_cycle(key, word):
        return side
    return RIGHT if side == LEFT else LEFT


@traceFunction({"g": "g", "n": "n"})
def find_disjoint_flat(g: int, n: int, signature: Sequence[int], arf: Optional[int] = None) -> FlatCertificate:
    """A framing with signature ``signature`` and two disjoint witnesses for its admissible curve graph.

    The curves a_1, ..., a_g of the stored basis plus one curve z split the
    surface into two genus-0 pieces.  The a_i get winding numbers spaced more
    than 2K apart (K the total size of the signature), which keeps every
    complementary subset sum away from the winding-0 condition.
    """
    if g < 3:
        raise WitnessError(f"disjoint witnesses need genus at least 3, got {g}")
    tri = canonical_triangulation(g, n)
    signature = tuple(int(s) for s in signature)
    if len(signature) != n or sum(signature) != tri.surface.euler:
        raise WitnessError(f"signature {signature} does not sum to {tri.surface.euler} over {n} punctures")
    step = 2 * sum(abs(s) for s in signature) + 1
    x = [i * step for i in range(1, g + 1)]
    positive = tuple(p for p, s in enumerate(signature) if s >= 0)
    values: List[int] = []
    for xi in x:
        values.extend((xi, 0))
    spin = all(s % 2 for s in signature)
    if arf is not None and spin:
        if invariants(framing_from_gsb(tri, values, signature)).arf != arf % 2:
            # x_2 + 1 is odd, so moving y_2 from 0 to 1 flips the Arf invariant
            values[3] = 1
    phi = framing_from_gsb(tri, values, signature, arf=arf if spin else None)

    a_words = [tri.gsb[2 * i] for i in range(g)]
    a_curves = multicurve_of(tri, a_words)
    sides = []
    for word in a_words:
        key = unoriented_key(tri, word)
        sides.append((a_curves.components.index(key), stored_side(tri, key, word, LEFT)))
    z = cut_off_circles(a_curves, sides, positive)
    alpha = a_curves.union(z)
    decomposition = cut(alpha)
    a1 = alpha.components.index(a_curves.components[sides[0][0]])
    w_plus = decomposition.curve_sides[a1][0 if sides[0][1] == LEFT else 1]
    z_index = alpha.components.index(z.components[0])
    z_left, z_right = decomposition.curve_sides[z_index]
    if w_plus not in (z_left, z_right) or z_left == z_right:
        raise WitnessError("the cut-off curve does not separate the two pieces")
    w_minus = z_right if z_left == w_plus else z_left
    z_side = LEFT if z_left == w_plus else RIGHT
    z_value = boundary_winding(phi, alpha, z_index, z_side)
    z_word = z.components[0] if z_side == LEFT else inverse(tri, z.components[0])
    xs = tuple(x) + (z_value,)
    curves = tuple(a_words) + (tuple(z_word),)
    plus = is_witness(WitnessQuery(alpha, w_plus, phi))
    minus = is_witness(WitnessQuery(alpha, w_minus, phi))
    if not (plus and minus):
        raise WitnessError(f"constructed pieces are not both witnesses: {plus.reason}; {minus.reason}")
    logger.info("disjoint witnesses on S_{%d,%d}: x=%s", g, n, xs)
    return FlatCertificate(
        phi, alpha, curves, w_plus, w_minus, xs, positive, {"w_plus": plus.clauses, "w_minus": minus.clauses}
    )


def check_certificate(certificate: FlatCertificate) -> List[Dict]:
    """Re-run every embedded check; each entry names a clause and whether it passed."""
    phi = certificate.framing
    alpha = certificate.alpha
    tri = phi.tri
    g = tri.genus
    results: List[Dict] = []

    def record(clause: str, passed: bool, **detail) -> bool:
        results.append({"clause": clause, "passed": bool(passed), **detail})
        return passed

    if not record("surface", alpha.surface == phi.surface and len(certificate.x) == g + 1):
        return results
    keys = multicurve_of(tri, certificate.curves)
    if not record("curves_match_alpha", keys == alpha and len(certificate.curves) == g + 1):
        return results
    decomposition = cut(alpha)
    plus = decomposition.component(certificate.w_plus)
    side_of = {alpha.components[j]: side for j, side in plus.boundary}
    observed = []
    for word in certificate.curves:
        key = unoriented_key(tri, word)
        if key not in side_of:
            record("windings", False, detail="curve does not bound W+")
            return results
        j = alpha.components.index(key)
        observed.append(boundary_winding(phi, alpha, j, side_of[key]))
    record("windings", tuple(observed) == certificate.x, observed=observed)
    k = len(certificate.positive_punctures)
    lhs = sum(certificate.x) + sum(phi.signature[p] for p in certificate.positive_punctures)
    record("coherence", lhs == 1 - g - k, lhs=lhs, rhs=1 - g - k)
    for name, w in (("w_plus", certificate.w_plus), ("w_minus", certificate.w_minus)):
        verdict = is_witness(WitnessQuery(alpha, w, phi))
        record(name, verdict.ok, reason=verdict.reason)
    return results


def third_witness_candidates(
    certificate: FlatCertificate, bound: int, max_components: int = 2
) -> List[Tuple[NormalMulticurve, int]]:
    """Enumerated witnesses disjoint from both W+ and W-; there should be none."""
    phi = certificate.framing
    alpha = certificate.alpha
    found: List[Tuple[NormalMulticurve, int]] = []
    for gamma in enumerate_multicurves(phi.tri, bound, max_components=max_components, bound_mode=TOTAL_BOUND):
        for idx in witness_components(phi, gamma):
            if subsurfaces_overlap(gamma, idx, alpha, certificate.w_plus):
                continue
            if subsurfaces_overlap(gamma, idx, alpha, certificate.w_minus):
                continue
            found.append((gamma, idx))
    logger.info("third-witness search at bound %d: %d candidates", bound, len(found))
    return found
