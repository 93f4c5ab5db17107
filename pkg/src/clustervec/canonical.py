"""Canonical forms of small square integer matrices under simultaneous permutation.

Used for exchange matrices (mutation classes) and for Cartan/weighted
diagrams (isomorphism classes). Vertices are first colored by iterated
refinement of an isomorphism-invariant signature; the canonical labeling is
then the lexicographically least sequence of per-position chunks, found by
expanding only tied minimal branches.
"""
from __future__ import annotations

import numpy as np


def _refine(m: list[list[int]]) -> list[int]:
    n = len(m)

    def ranked(sig):
        ranks = {s: r for r, s in enumerate(sorted(set(sig)))}
        return [ranks[s] for s in sig]

    colors = ranked([m[v][v] for v in range(n)])
    while True:
        sig = [
            (colors[v], tuple(sorted((m[v][u], m[u][v], colors[u]) for u in range(n)
                                     if u != v and (m[v][u] or m[u][v]))))
            for v in range(n)
        ]
        new = ranked(sig)
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def canonical_labeling(mat) -> tuple[tuple, list[int]]:
    """Return ``(key, order)``; ``mat[order][:, order]`` is the canonical matrix.

    Two matrices are simultaneous-permutation equivalent iff their keys agree.
    """
    m = np.asarray(mat).tolist()
    n = len(m)
    if n == 0:
        return (), []
    colors = _refine(m)

    def chunk(prefix, v):
        out = [colors[v], m[v][v]]
        for p in prefix:
            out.append(m[v][p])
            out.append(m[p][v])
        return tuple(out)

    branches = [[]]
    key: list[tuple] = []
    for _ in range(n):
        best = None
        nxt = []
        for prefix in branches:
            used = set(prefix)
            for v in range(n):
                if v in used:
                    continue
                c = chunk(prefix, v)
                if best is None or c < best:
                    best = c
                    nxt = [prefix + [v]]
                elif c == best:
                    nxt.append(prefix + [v])
        key.append(best)
        branches = nxt
    return tuple(key), branches[0]


def canonical_key(mat) -> tuple:
    return canonical_labeling(mat)[0]


def canonical_matrix(mat) -> np.ndarray:
    arr = np.asarray(mat)
    _, order = canonical_labeling(arr)
    o = np.asarray(order, dtype=int)
    return arr[np.ix_(o, o)]


def isomorphism(mat1, mat2) -> dict[int, int] | None:
    """A vertex map ``f`` with ``mat2[f(i)][f(j)] == mat1[i][j]``, or None."""
    k1, o1 = canonical_labeling(mat1)
    k2, o2 = canonical_labeling(mat2)
    if k1 != k2:
        return None
    return {a: b for a, b in zip(o1, o2)}
