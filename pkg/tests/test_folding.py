import numpy as np
import pytest

from clustervec.diagrams import compute_V, templates_for
from clustervec.dynkin_types import ClusterTypeLabel, parse_label, reference_matrix
from clustervec.enumeration import detect_cluster_type, enumerate_matrix_class, enumerate_seeds, extract_vector_sets
from clustervec.errors import NotAdmissible, NotFoldedType, RepresentativeDependent, SignConditionViolated
from clustervec.folding import (
    OrbitAutomorphism,
    commutation_walk,
    fold_c_matrix,
    fold_d_matrix,
    fold_matrix,
    fold_seed,
    is_admissible,
    orbit_mutate,
    unfold_type,
)
from clustervec.matrices import ExchangeMatrix, initial_seed, is_bipartite, mutate_b
from clustervec.roots import fold_vector

D4_PRINTED = ExchangeMatrix([[0, -1, 0, 0], [1, 0, -1, -1], [0, 1, 0, 0], [0, 1, 0, 0]])
SIGMA_34 = OrbitAutomorphism.parse("(34)", 4)


def test_parse_cycles():
    assert SIGMA_34.sigma == (0, 1, 3, 2)
    assert OrbitAutomorphism.parse("(3 4)", 4) == SIGMA_34
    s = OrbitAutomorphism.parse("(1,5)(2,4)", 5)
    assert s.orbits == [(0, 4), (1, 3), (2,)]
    assert OrbitAutomorphism.parse(s.cycle_string(), 5) == s
    with pytest.raises(ValueError):
        OrbitAutomorphism.parse("(15)", 4)
    with pytest.raises(ValueError):
        OrbitAutomorphism((0, 0, 1))


def test_d4_to_b3():
    assert is_admissible(D4_PRINTED, SIGMA_34)
    folded = fold_matrix(D4_PRINTED, SIGMA_34)
    assert folded.tolist() == [[0, -1, 0], [1, 0, -1], [0, 2, 0]]
    assert detect_cluster_type(folded) == ClusterTypeLabel("B", 3)
    s = fold_seed(initial_seed(D4_PRINTED), SIGMA_34)
    assert np.array_equal(s.c, np.eye(3, dtype=np.int64))
    assert np.array_equal(s.d, -np.eye(3, dtype=np.int64))


def test_a3_bipartite_fold():
    a3 = reference_matrix(ClusterTypeLabel("A", 3))
    sigma = OrbitAutomorphism.parse("(13)", 3)
    assert is_admissible(a3, sigma)
    folded = fold_matrix(a3, sigma)
    assert folded.n == 2 and abs(folded.b[0, 1] * folded.b[1, 0]) == 2


def test_not_admissible():
    cyc = ExchangeMatrix([[0, 1, -1], [-1, 0, 1], [1, -1, 0]])
    with pytest.raises(NotAdmissible):
        fold_matrix(cyc, OrbitAutomorphism.parse("(12)", 3))
    # an arrow inside an orbit
    a2 = ExchangeMatrix([[0, 1], [-1, 0]])
    assert not is_admissible(a2, OrbitAutomorphism.parse("(12)", 2))


def test_orbit_mutation_commutes_with_fold():
    b = D4_PRINTED
    for k in range(3):
        lhs = fold_matrix(orbit_mutate(b, SIGMA_34, k), SIGMA_34)
        rhs = mutate_b(fold_matrix(b, SIGMA_34), k)
        assert lhs == rhs
    assert orbit_mutate(b, SIGMA_34, (2, 3)) == orbit_mutate(b, SIGMA_34, 2)
    with pytest.raises(ValueError):
        orbit_mutate(b, SIGMA_34, (1, 2))


def test_fold_checks():
    sigma = OrbitAutomorphism.parse("(23)", 3)
    assert fold_c_matrix(np.eye(3, dtype=np.int64), sigma).tolist() == [[1, 0], [0, 1]]
    with pytest.raises(SignConditionViolated):
        fold_c_matrix(np.array([[1, 0, 0], [0, 1, 0], [0, 1, 1]]), sigma)
    c_bad = np.array([[1, 0, 0], [0, 1, -1], [0, -1, 1]])
    with pytest.raises(SignConditionViolated):
        fold_c_matrix(c_bad, sigma)
    b = ExchangeMatrix([[0, 1, 1], [-1, 0, 0], [-1, 0, 0]])
    d = np.array([[-1, 0, 0], [0, -1, 0], [0, 0, -1]])
    assert fold_d_matrix(d, sigma, b).tolist() == [[-1, 0], [0, -1]]
    with pytest.raises(SignConditionViolated):
        fold_d_matrix(np.array([[-1, 0, 0], [0, -1, 0], [1, 0, -1]]), sigma, b)


def test_representative_dependence_detected():
    from clustervec.folding import _fold_square
    x = np.array([[0, 1, 2], [0, 0, 0], [0, 0, 0]])
    with pytest.raises(RepresentativeDependent):
        _fold_square(x, OrbitAutomorphism.parse("(23)", 3))


@pytest.mark.parametrize("name", ["B2", "B3", "C3", "B4", "C4"])
def test_unfold_every_member(name):
    for m in enumerate_matrix_class(reference_matrix(parse_label(name))):
        big, sigma = unfold_type(m)
        assert fold_matrix(big, sigma) == m
        assert is_bipartite(big) == is_bipartite(m)
        walk = commutation_walk(big, sigma, steps=20, rng_seed=7)
        assert walk.ok, walk.to_json()


@pytest.mark.parametrize("name", ["B3", "C3", "B4", "C4"])
def test_folded_v_sets(name):
    z = parse_label(name)
    for m in enumerate_matrix_class(reference_matrix(z)):
        big, sigma = unfold_type(m)
        zb = detect_cluster_type(big)
        v_big = compute_V(big, templates_for(zb))
        v = compute_V(m, templates_for(z))
        assert {fold_vector(x, sigma.orbits) for x in v_big} == v
        c_big = extract_vector_sets(enumerate_seeds(big)).c_pos
        assert {fold_vector(x, sigma.orbits) for x in c_big} >= extract_vector_sets(enumerate_seeds(m)).c_pos


def test_unfold_rejects_other_types():
    with pytest.raises(NotFoldedType):
        unfold_type(reference_matrix(ClusterTypeLabel("A", 3)))


def test_walk_report_json():
    walk = commutation_walk(D4_PRINTED, SIGMA_34, steps=5)
    obj = walk.to_json()
    assert obj["ok"] and len(obj["steps"]) == 5
    assert obj["initial_c_identity"]
