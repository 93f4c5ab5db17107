"""Property checks: exhaustive up to rank 4, seeded random walks at ranks 5 to 8.

Runs on its own: ``python3 tests/test_properties.py`` or ``pytest tests/test_properties.py``.
"""
import itertools
import sys

import numpy as np
import pytest

from clustervec.dynkin_types import labels_of_rank, reference_matrix
from clustervec.enumeration import enumerate_matrix_class, enumerate_seeds
from clustervec.matrices import (
    ExchangeMatrix,
    SeedState,
    initial_seed,
    is_sign_coherent,
    mutate_b,
    mutate_seed,
)
from clustervec.probes import MARKOV
from clustervec.roots import RootStatus, classify_root, context_of
from clustervec.surface import MarkedSurface, intersection_pairing

SEED = 8675309
WALK = 40
AFFINE_A2 = ExchangeMatrix([[0, 1, 1], [-1, 0, 1], [-1, -1, 0]])


def _members(ranks):
    out = []
    for n in ranks:
        for z in labels_of_rank(n):
            if not (z.family == "C" and n == 2):
                out.extend(enumerate_matrix_class(reference_matrix(z)).members)
    return out


SMALL = _members(range(1, 5))
LARGE_LABELS = [z for n in range(5, 9) for z in labels_of_rank(n)]


def _ids(m):
    return str(m.tolist())


def _scalar_mutation(s: SeedState, k: int):
    """Entry-by-entry mutation rules, written independently of the vectorized engine."""
    n = s.n
    b, c, d = s.b.b.tolist(), s.c.tolist(), s.d.tolist()
    p = lambda x: max(x, 0)  # noqa: E731
    nb = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if k in (i, j):
                nb[i][j] = -b[i][j]
            else:
                nb[i][j] = b[i][j] + p(b[i][k]) * p(b[k][j]) - p(-b[i][k]) * p(-b[k][j])
    nc = [row[:] for row in c]
    for j in range(n):
        for i in range(n):
            if j == k:
                nc[i][j] = -c[i][k]
            else:
                nc[i][j] = c[i][j] + p(c[i][k]) * p(b[k][j]) - p(-c[i][k]) * p(-b[k][j])
    nd = [row[:] for row in d]
    for i in range(n):
        plus = sum(p(b[l][k]) * d[i][l] for l in range(n))
        minus = sum(p(-b[l][k]) * d[i][l] for l in range(n))
        nd[i][k] = -d[i][k] + max(plus, minus)
    return nb, nc, nd


def _check_step(s: SeedState, k: int) -> SeedState:
    t = mutate_seed(s, k)
    nb, nc, nd = _scalar_mutation(s, k)
    assert t.b.b.tolist() == nb
    assert t.c.tolist() == nc
    assert t.d.tolist() == nd
    # only column k moves in D
    others = [j for j in range(s.n) if j != k]
    assert np.array_equal(t.d[:, others], s.d[:, others])
    back = mutate_seed(t, k)
    assert back.b == s.b and np.array_equal(back.c, s.c) and np.array_equal(back.d, s.d)
    assert all(is_sign_coherent(col) for col in t.c.T)
    return t


# --- exhaustive, rank <= 4 ---------------------------------------------------

@pytest.mark.parametrize("m", SMALL, ids=_ids)
def test_mutation_and_columns_exhaustive(m):
    atlas = enumerate_seeds(m, quotient_labels=False)
    for s in atlas:
        for k in range(m.n):
            _check_step(s, k)
            assert mutate_b(mutate_b(s.b, k), k) == s.b


@pytest.mark.parametrize("m", SMALL, ids=_ids)
def test_seed_is_determined_by_its_cluster(m):
    # labeled seeds reached along different paths: equal D forces equal B and C
    seen = {}
    for s in enumerate_seeds(m, quotient_labels=False):
        key = s.d.tobytes()
        if key in seen:
            other = seen[key]
            assert other.b == s.b and np.array_equal(other.c, s.c)
        seen[key] = s


@pytest.mark.parametrize("surface", [MarkedSurface(p, False) for p in range(4, 8)] + [MarkedSurface(4, True)],
                         ids=str)
def test_pairing_symmetry_exhaustive(surface):
    arcs = surface.arcs()
    for a, b in itertools.product(arcs, repeat=2):
        ab = intersection_pairing(a, b, surface)
        assert ab == intersection_pairing(b, a, surface)
        assert ab >= -1 and (ab == -1) == (a == b)


def _quadratic_consistent(ctx, v):
    status = classify_root(ctx, v)
    q = ctx.quadratic_form(v)
    if status is RootStatus.REAL:
        # a real root has the length of some simple root
        assert q in {2 * t for t in ctx.symmetrizer}
    elif status is RootStatus.IMAGINARY:
        assert q <= 0
    return status


@pytest.mark.parametrize("m", SMALL + [MARKOV, AFFINE_A2], ids=_ids)
def test_quadratic_form_exhaustive(m):
    ctx = context_of(m)
    for v in itertools.product(range(3), repeat=m.n):
        if any(v):
            _quadratic_consistent(ctx, v)
            neg = tuple(-x for x in v)
            assert classify_root(ctx, neg) is classify_root(ctx, v)


# --- randomized, rank 5..8 -----------------------------------------------------

@pytest.mark.parametrize("z", LARGE_LABELS, ids=str)
def test_random_walks(z):
    rng = np.random.default_rng([SEED, ord(z.family), z.rank])
    m = reference_matrix(z)
    s = initial_seed(m)
    ctx = context_of(m)
    for _ in range(WALK):
        k = int(rng.integers(m.n))
        s = _check_step(s, k)
        for col in s.c.T:
            v = tuple(int(x) for x in col)
            assert _quadratic_consistent(ctx, v).is_root()
    # the matrices reached along the walk keep the same properties
    for _ in range(10):
        v = tuple(int(x) for x in rng.integers(0, 3, size=m.n))
        if any(v):
            _quadratic_consistent(context_of(s.b), v)


@pytest.mark.parametrize("surface", [MarkedSurface(p, False) for p in range(8, 12)]
                         + [MarkedSurface(p, True) for p in range(5, 9)], ids=str)
def test_pairing_symmetry_random(surface):
    rng = np.random.default_rng([SEED, surface.boundary_count, surface.punctured])
    arcs = surface.arcs()
    for _ in range(300):
        i, j = rng.integers(len(arcs), size=2)
        a, b = arcs[i], arcs[j]
        assert intersection_pairing(a, b, surface) == intersection_pairing(b, a, surface)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
