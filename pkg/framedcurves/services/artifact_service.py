import json
import logging
from itertools import combinations
from typing import Dict, List

from framedcurves.errors import ArtifactError, FramedCurvesError
from framedcurves.framing import Framing
from framedcurves.graphs import CADM, DISJOINT_EDGE, E_GRAPH, GENUS_SEP, KINDS, MODEL_K, MODEL_KBAR, model_edges
from framedcurves.resources.triangulation import canonical_triangulation
from framedcurves.strata import UNKNOWN, YES, is_divisorial_candidate, kbar_vertex
from framedcurves.surface_core import NormalMulticurve, geometric_intersection, is_genus_separating
from framedcurves.witness import FlatCertificate, check_certificate, is_admissible, is_k_vertex

logger = logging.getLogger(__name__)


class ArtifactService:
    """Re-runs the checks embedded in an artifact written by the command line."""

    def load(self, path: str) -> Dict:
        try:
            with open(path) as handle:
                record = json.load(handle)
        except OSError as e:
            raise ArtifactError(f"could not read {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ArtifactError(f"{path} is not valid JSON: {e}") from e
        if not isinstance(record, dict) or "kind" not in record:
            raise ArtifactError(f"{path} carries no artifact kind")
        return record

    def verify(self, path: str) -> List[Dict]:
        """Check results in order; raises ArtifactError on the first failing clause."""
        record = self.load(path)
        kind = record["kind"]
        try:
            if kind == "flat_certificate":
                results = check_certificate(FlatCertificate.from_dict(record))
            elif kind == "snapshot":
                results = self._check_snapshot(record)
            else:
                raise ArtifactError(f"unknown artifact kind {kind!r}")
        except ArtifactError:
            raise
        except (FramedCurvesError, KeyError, TypeError, ValueError) as e:
            raise ArtifactError(f"could not rebuild artifact: {e}") from e
        for result in results:
            if not result["passed"]:
                raise ArtifactError(f"check {result['clause']} failed", clause=result["clause"], exit_code=1)
        logger.info(f"Verified {path}: {len(results)} checks passed")
        return results

    def _check_snapshot(self, record: Dict) -> List[Dict]:
        phi = Framing.from_dict(record["framing"])
        surface = record["surface"]
        tri = canonical_triangulation(int(surface["g"]), int(surface["n"]))
        vertices = [NormalMulticurve.from_weights(tri, w) for w in record["vertices"]]
        graph_kind = record["graph"]
        if graph_kind not in KINDS:
            raise ArtifactError(f"unknown graph kind {graph_kind!r}")
        results = [{"clause": "vertices", "passed": all(self._qualifies(graph_kind, phi, v, record) for v in vertices)}]
        if graph_kind in (MODEL_K, MODEL_KBAR, E_GRAPH):
            cap = int(record["max_components"])
            results.append({"clause": "components", "passed": all(v.component_count <= cap for v in vertices)})
        if graph_kind == MODEL_KBAR:
            unknown = [NormalMulticurve.from_weights(tri, w) for w in record["unknown"]]
            bound = int(record["divisorial_bound"])
            results.append({"clause": "unknown", "passed": all(kbar_vertex(phi, u, bound) == UNKNOWN for u in unknown)})
        edges = {(i, j, kind) for i, j, kind in record["edges"]}
        if graph_kind in (MODEL_K, MODEL_KBAR):
            expected, flips = model_edges(vertices)
            recorded_flips = {(i, j): kind for i, j, kind in record["flips"]}
            results.append({"clause": "edges", "passed": edges == set(expected)})
            results.append({"clause": "flips", "passed": recorded_flips == flips})
        else:
            expected = {
                (i, j, DISJOINT_EDGE)
                for i, j in combinations(range(len(vertices)), 2)
                if geometric_intersection(vertices[i], vertices[j]) == 0
            }
            results.append({"clause": "edges", "passed": edges == expected})
        return results

    @staticmethod
    def _qualifies(graph_kind: str, phi: Framing, vertex: NormalMulticurve, record: Dict) -> bool:
        if graph_kind == CADM:
            return vertex.component_count == 1 and is_admissible(phi, vertex)
        if graph_kind == GENUS_SEP:
            return is_genus_separating(vertex)
        if graph_kind == MODEL_K:
            return is_k_vertex(phi, vertex)
        if graph_kind == MODEL_KBAR:
            return kbar_vertex(phi, vertex, int(record["divisorial_bound"])) == YES
        return bool(is_divisorial_candidate(phi, vertex))
