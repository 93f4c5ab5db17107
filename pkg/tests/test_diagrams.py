import json

import numpy as np
import pytest

from clustervec.diagrams import (
    DynkinDiagram,
    WeightedDiagram,
    catalog_from_json,
    catalog_is_complete,
    catalog_to_json,
    check_membership_X,
    check_membership_X_An,
    compute_V,
    diagram_of,
    diagram_of_matrix,
    enumerate_embeddings,
    extract_templates,
    string_diagram,
    templates_A,
    templates_for,
    vector_to_weighted_diagram,
    write_catalog,
)
from clustervec.dynkin_types import ClusterTypeLabel, parse_label, positive_root_count, reference_matrix, standard_cartan
from clustervec.enumeration import enumerate_matrix_class, extract_vector_sets, enumerate_seeds
from clustervec.errors import DisconnectedSupport
from clustervec.canonical import canonical_key
from clustervec.matrices import CartanMatrix, ExchangeMatrix, cartan_counterpart

from conftest import CYCLIC_A3, EXAMPLE_D5, SIX

TRIANGLE = diagram_of_matrix(CYCLIC_A3)
LINEAR_A3 = diagram_of(standard_cartan(ClusterTypeLabel("A", 3)))


def _cycle(n):
    a = 2 * np.eye(n, dtype=int)
    for i in range(n):
        a[i, (i + 1) % n] = a[(i + 1) % n, i] = -1
    return DynkinDiagram(tuple(map(tuple, a.tolist())))


def _star(k):
    a = 2 * np.eye(k + 1, dtype=int)
    a[0, 1:] = a[1:, 0] = -1
    return DynkinDiagram(tuple(map(tuple, a.tolist())))


def test_triangle_diagram():
    assert TRIANGLE.edges == {(0, 1): (1, 1), (0, 2): (1, 1), (1, 2): (1, 1)}
    assert TRIANGLE.triangle_count() == 1 and TRIANGLE.cyclomatic_number() == 1


def test_b2_edge_label():
    x = diagram_of(CartanMatrix(np.array([[2, -1], [-2, 2]]), (2, 1)))
    (edge, label), = x.edges.items()
    assert label[0] * label[1] == 2
    assert not x.is_simply_laced()
    assert "dir=forward" in x.to_dot()


def test_edgeless():
    x = diagram_of(CartanMatrix(2 * np.eye(3, dtype=int), (1, 1, 1)))
    assert x.edges == {} and not x.is_connected()


def test_vector_to_weighted_diagram():
    w = vector_to_weighted_diagram((1, 1, 0), TRIANGLE)
    assert w == string_diagram([1, 1])
    assert vector_to_weighted_diagram((0, 1, 0), TRIANGLE) == string_diagram([1])
    with pytest.raises(DisconnectedSupport):
        vector_to_weighted_diagram((1, 0, 1), LINEAR_A3)


def test_embedding_counts():
    assert len(enumerate_embeddings(string_diagram([1, 1]), TRIANGLE)) == 3
    assert len(enumerate_embeddings(string_diagram([1, 1, 1]), TRIANGLE)) == 0
    assert len(enumerate_embeddings(string_diagram([1]), _cycle(5))) == 5


def test_embedding_respects_weights():
    # a 2-1 string lands on a path in both directions
    embs = enumerate_embeddings(string_diagram([2, 1]), LINEAR_A3)
    assert {e.vector() for e in embs} == {(2, 1, 0), (1, 2, 0), (0, 2, 1), (0, 1, 2)}


def test_templates_A():
    assert len(templates_A(1)) == 1
    assert len(templates_A(3)) == 3 and len(templates_A(5)) == 5
    assert set(extract_templates(ClusterTypeLabel("A", 3))) == set(templates_A(3))


def test_weighted_equality_is_up_to_relabeling():
    a = vector_to_weighted_diagram((1, 2, 1), LINEAR_A3)
    b = vector_to_weighted_diagram((1, 2, 1), diagram_of_matrix(reference_matrix(ClusterTypeLabel("A", 3))))
    assert a == b and hash(a) == hash(b)
    assert a != string_diagram([1, 1, 1])


def test_d4_has_weight_two_template():
    temps = extract_templates(ClusterTypeLabel("D", 4))
    assert any(max(w.weights) == 2 for w in temps)
    assert len(temps) == 6


def test_g2_templates_give_six():
    z = ClusterTypeLabel("G", 2)
    temps = extract_templates(z)
    x = diagram_of_matrix(reference_matrix(z))
    assert sum(len(enumerate_embeddings(w, x)) for w in temps) == 6


def test_compute_V_examples():
    assert compute_V(CYCLIC_A3, templates_A(3)) == SIX
    a2 = ExchangeMatrix([[0, 1], [-1, 0]])
    assert compute_V(a2, templates_A(2)) == {(1, 0), (0, 1), (1, 1)}
    v = compute_V(EXAMPLE_D5, templates_for(ClusterTypeLabel("D", 5)))
    assert len(v) == 20
    assert v == extract_vector_sets(enumerate_seeds(EXAMPLE_D5)).c_pos


def test_membership_An():
    assert check_membership_X_An(TRIANGLE)
    assert check_membership_X_An(LINEAR_A3)
    assert not check_membership_X_An(_cycle(4))
    assert not check_membership_X_An(_star(5))


def test_membership_An_matches_class():
    for n in range(1, 6):
        z = ClusterTypeLabel("A", n)
        for m in enumerate_matrix_class(reference_matrix(z)):
            assert check_membership_X_An(diagram_of_matrix(m))
    for z in ("D4", "D5"):
        for m in enumerate_matrix_class(reference_matrix(parse_label(z))):
            x = diagram_of_matrix(m)
            assert check_membership_X(parse_label(z), x)


def test_membership_other():
    assert check_membership_X(ClusterTypeLabel("D", 5), diagram_of_matrix(EXAMPLE_D5))
    assert not check_membership_X(ClusterTypeLabel("D", 4), TRIANGLE)
    for n in (3, 4, 5):
        z = ClusterTypeLabel("B", n)
        assert check_membership_X(z, diagram_of(standard_cartan(z)))


def test_c5_member_with_given_counterpart():
    target = np.array([
        [2, -1, 0, 0, 0],
        [-1, 2, -1, 0, 0],
        [0, -1, 2, -2, -1],
        [0, 0, -1, 2, -1],
        [0, 0, -1, -2, 2],
    ])
    cls = enumerate_matrix_class(reference_matrix(ClusterTypeLabel("C", 5)))
    hits = [m for m in cls if canonical_key(cartan_counterpart(m).a) == canonical_key(target)]
    assert hits
    m = hits[0]
    assert len(compute_V(m, templates_for(ClusterTypeLabel("C", 5)))) == 25


def test_catalog_roundtrip(tmp_path):
    z = ClusterTypeLabel("B", 3)
    temps = extract_templates(z)
    obj = json.loads(json.dumps(catalog_to_json(z, temps)))
    z2, back = catalog_from_json(obj)
    assert z2 == z and back == temps
    assert obj["complete"]


def test_catalog_written_and_reused(tmp_path):
    z = ClusterTypeLabel("C", 3)
    path = write_catalog(z, extract_templates(z), tmp_path, members_used=2, class_size=5)
    obj = json.loads(path.read_text())
    assert obj["schema"] == "clustervec.templates/1" and not obj["complete"]
    assert all("features" in t for t in obj["templates"])


def test_catalog_bad_schema():
    with pytest.raises(ValueError):
        catalog_from_json({"schema": "nope"})


def test_shipped_catalogs_complete_for_classical():
    for name in ("B4", "C5", "D6", "F4", "E6", "G2"):
        assert catalog_is_complete(parse_label(name))


def test_features_and_json():
    w = vector_to_weighted_diagram((1, 2, 1), LINEAR_A3)
    f = w.features()
    assert f["height"] == 4 and f["max_weight"] == 2 and f["tree"]
    assert WeightedDiagram.from_json(w.to_json()) == w
    assert w.to_dot().startswith("graph") or w.to_dot().startswith("digraph")


@pytest.mark.parametrize("name", ["B3", "C3", "D4", "B4", "C4", "G2", "F4", "D5"])
def test_theorem_equality_small(name):
    z = parse_label(name)
    temps = templates_for(z)
    for m in enumerate_matrix_class(reference_matrix(z)):
        vs = extract_vector_sets(enumerate_seeds(m))
        assert vs.c_pos == vs.d_noninit == compute_V(m, temps)
        assert len(vs.c_pos) == positive_root_count(z)
