import json
import random

import pytest

from framedcurves.errors import ArtifactError, GraphError
from framedcurves.framing import framing_from_gsb
from framedcurves.graphs import (
    CADM,
    GENUS_SEP,
    MODEL_K,
    MODEL_KBAR,
    GraphSnapshot,
    build_graph,
    connectivity_report,
    diameter_of,
    distance,
    inclusion_lipschitz_report,
    intersection_distance_report,
    model_edges,
    p_set,
    pi_constants_report,
    pi_projection,
    theta,
)
from framedcurves.services.artifact_service import ArtifactService
from framedcurves.services.export_service import ExportService
from framedcurves.strata import YES, kbar_vertex
from framedcurves.surface_core import MappingClassWord, geometric_intersection, is_genus_separating
from framedcurves.witness import is_admissible, is_k_vertex


@pytest.fixture(scope="module")
def basis_bound(basis31):
    return max(c.total_weight for c in basis31)


@pytest.fixture(scope="module")
def cadm(phi_zero, basis_bound):
    return build_graph(CADM, phi_zero, basis_bound)


def test_admissible_snapshot(cadm, phi_zero, basis31):
    assert all(is_admissible(phi_zero, v) for v in cadm.vertices)
    for curve in basis31:
        assert curve in cadm
    edges = {(i, j) for i, j, _ in cadm.edges}
    for i in range(len(cadm.vertices)):
        for j in range(i + 1, len(cadm.vertices)):
            disjoint = geometric_intersection(cadm.vertices[i], cadm.vertices[j]) == 0
            assert ((i, j) in edges) is disjoint


def test_distances_in_snapshot(cadm, basis31):
    a1, b1, a2 = basis31[0], basis31[1], basis31[2]
    assert distance(cadm, a1, a1) == 0
    assert distance(cadm, a1, a2) == 1
    assert distance(cadm, a1, b1) == 2
    assert diameter_of(cadm, [a1, a2]) == 1
    assert cadm.index_of(a1) in cadm.neighbors(a2)


def test_unknown_vertex(cadm, torus_boundary31):
    with pytest.raises(GraphError):
        cadm.index_of(torus_boundary31)
    with pytest.raises(GraphError):
        cadm.index_of(len(cadm.vertices))


def test_rejects_unknown_kind_and_low_genus(phi_zero, tri21):
    with pytest.raises(GraphError):
        build_graph("curve_complex", phi_zero, 4)
    with pytest.raises(GraphError):
        build_graph(CADM, framing_from_gsb(tri21, [0] * 4, [-3]), 4)


def test_snapshot_outputs(cadm):
    dot = cadm.to_dot()
    assert dot.startswith("graph cadm {")
    assert dot.count(" -- ") == len(cadm.edges)
    table = cadm.distance_table([0])
    assert list(table.columns) == ["source", "target", "distance", "bound"]
    assert table.loc[table.target == 0, "distance"].tolist() == [0]
    record = cadm.to_dict()
    assert record["kind"] == CADM
    assert len(record["vertices"]) == len(cadm.vertices)


def test_empty_snapshot(phi_zero):
    snapshot = GraphSnapshot(CADM, (), (), 0, phi_zero)
    assert snapshot.distance_table().empty
    assert snapshot.to_dot() == "graph cadm {\n}\n"


def test_exported_snapshot_verifies(cadm, tmp_path):
    paths = ExportService(str(tmp_path)).write_snapshot(cadm, "cadm")
    assert [p.rsplit("/", 1)[-1] for p in paths] == ["cadm.json", "cadm.dot", "cadm_distances.csv"]
    results = ArtifactService().verify(paths[0])
    assert [r["clause"] for r in results] == ["vertices", "edges"]


def test_projection_of_torus_boundary(phi_zero, cadm, torus_boundary31, basis31):
    result = pi_projection(phi_zero, torus_boundary31, cadm.enumeration_bound, cadm)
    for curve in basis31:
        assert curve in result
    assert result.diameter_in_target is not None
    assert result.diameter_in_target <= 2
    with pytest.raises(GraphError):
        pi_projection(phi_zero, basis31[0], 4)


def test_genus_separating_snapshot(phi_zero, torus_boundary31):
    bound = torus_boundary31.total_weight
    snapshot = build_graph(GENUS_SEP, phi_zero, bound)
    assert torus_boundary31 in snapshot
    assert all(is_genus_separating(v) for v in snapshot.vertices)
    report = intersection_distance_report(snapshot)
    assert report["bound"] == bound


@pytest.fixture(scope="module")
def model_k(phi_zero, basis_bound):
    return build_graph(MODEL_K, phi_zero, basis_bound, max_components=2)


def test_model_graph_vertices(model_k, phi_zero):
    assert all(is_k_vertex(phi_zero, v) for v in model_k.vertices)
    assert model_k.to_dict()["max_components"] == 2
    for i, j, kind in model_k.edges:
        if kind == "add_remove":
            small, big = sorted((model_k.vertices[i], model_k.vertices[j]), key=lambda v: v.component_count)
            assert big.contains(small)
            assert big.component_count == small.component_count + 1


def _moved(snapshot, word):
    vertices = tuple(word.apply(v) for v in snapshot.vertices)
    return GraphSnapshot(snapshot.kind, vertices, snapshot.edges, snapshot.enumeration_bound, snapshot.framing)


@pytest.mark.slow
def test_projection_constants(phi_zero, rng):
    cadm = build_graph(CADM, phi_zero, 12)
    genus_sep = build_graph(GENUS_SEP, phi_zero, 12)
    report = pi_constants_report(genus_sep, cadm)
    assert report["vertices"] >= 3
    assert report["empty_images"] == 0
    assert report["max_vertex_diameter"] <= 2
    assert report["max_edge_diameter"] <= 4
    # the same report for curves pushed around by twists, which keep disjointness
    pool = [v.components[0] for v in cadm.vertices]
    for _ in range(3):
        word = MappingClassWord.random(phi_zero.tri, rng, 3, pool=pool, max_power=1)
        assert pi_constants_report(_moved(genus_sep, word), _moved(cadm, word)) == report


@pytest.mark.slow
def test_connectivity(phi_zero):
    report = connectivity_report(phi_zero, random.Random(7), pair_bound=8, bound=24, samples=50)
    assert report["pass_rate"] == 1.0


def _exported(snapshot, tmp_path, stem):
    path = ExportService(str(tmp_path)).write_snapshot(snapshot, stem)[0]
    with open(path) as handle:
        return path, json.load(handle)


def _tampered(path, record, change):
    change(record)
    with open(path, "w") as handle:
        json.dump(record, handle)
    with pytest.raises(ArtifactError) as caught:
        ArtifactService().verify(path)
    assert caught.value.exit_code == 1
    return caught.value.clause


def _empty_vertex(record):
    record["vertices"][0] = [0] * len(record["vertices"][0])


def test_model_snapshot_checks(model_k, tmp_path):
    path, record = _exported(model_k, tmp_path, "model")
    results = ArtifactService().verify(path)
    assert [r["clause"] for r in results] == ["vertices", "components", "edges", "flips"]
    assert _tampered(path, json.loads(json.dumps(record)), _empty_vertex) == "vertices"
    assert _tampered(path, json.loads(json.dumps(record)), lambda r: r.update(max_components=0)) == "components"
    assert _tampered(path, json.loads(json.dumps(record)), lambda r: r["edges"].pop()) == "edges"


def test_model_snapshot_with_wrong_flip_kind(model_k, tmp_path):
    if not model_k.edge_details:
        pytest.skip("no flips at this bound")
    path, record = _exported(model_k, tmp_path, "model")

    def relabel(r):
        r["flips"][0][2] = "torus" if r["flips"][0][2] != "torus" else "four_holed_sphere"

    assert _tampered(path, record, relabel) == "flips"


def test_coned_snapshot_checks(model_k, phi_zero, tmp_path):
    # a model-graph vertex has no witness pieces, so it is a coned vertex at any bound
    vertices = model_k.vertices[:4]
    edges, flips = model_edges(vertices)
    coned = GraphSnapshot(
        MODEL_KBAR, vertices, tuple(edges), model_k.enumeration_bound, phi_zero, flips, divisorial_bound=4
    )
    assert all(kbar_vertex(phi_zero, v, 4) == YES for v in vertices)
    path, record = _exported(coned, tmp_path, "coned")
    results = ArtifactService().verify(path)
    assert [r["clause"] for r in results] == ["vertices", "components", "unknown", "edges", "flips"]
    moved = lambda r: r["unknown"].append(r["vertices"][0])  # noqa: E731
    assert _tampered(path, json.loads(json.dumps(record)), moved) == "unknown"
    assert _tampered(path, json.loads(json.dumps(record)), _empty_vertex) == "vertices"


def test_admissible_snapshot_with_extra_edge(cadm, tmp_path):
    path, record = _exported(cadm, tmp_path, "cadm")
    blocked = [
        [i, j, "disjoint"]
        for i in range(len(cadm.vertices))
        for j in range(i + 1, len(cadm.vertices))
        if [i, j, "disjoint"] not in record["edges"]
    ]
    assert blocked
    assert _tampered(path, record, lambda r: r["edges"].append(blocked[0])) == "edges"


def test_vertices_above_a_curve(phi_zero, basis31, basis_bound):
    a1 = basis31[0]
    found = p_set(phi_zero, a1, basis_bound)
    assert a1 in found
    for gamma in found:
        assert gamma.contains(a1)
        assert is_k_vertex(phi_zero, gamma)


def test_vertices_above_an_unconed_curve(tri31, basis31, basis_bound):
    phi = framing_from_gsb(tri31, [1, 0, 0, 0, 0, 0], [-5])
    with pytest.raises(GraphError):
        p_set(phi, basis31[0], basis_bound)


def test_theta_of_an_admissible_curve(phi_zero, basis31, basis_bound):
    a1 = basis31[0]
    result = theta(phi_zero, a1, basis_bound, samples=1)
    assert result.map_name == "Theta"
    assert result.source == a1
    assert a1 in result
    assert all(is_admissible(phi_zero, v) for v in result.image)
    assert result.diameter_in_target is None


def test_inclusion_into_the_model_graph(cadm, model_k):
    report = inclusion_lipschitz_report(cadm, model_k)
    assert cadm.edges
    assert report["missing"] == 0
    assert report["checked"] == len(cadm.edges)
    assert report["violations"] == []
    assert 1 <= report["max_distance"] <= 2
    empty = GraphSnapshot(MODEL_K, (), (), model_k.enumeration_bound, model_k.framing)
    assert inclusion_lipschitz_report(cadm, empty)["missing"] == len(cadm.edges)
