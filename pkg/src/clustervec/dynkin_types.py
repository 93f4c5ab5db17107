"""Finite-type labels, standard Cartan matrices and reference exchange matrices.

Cartan matrices follow the Kac convention ``a_ij = 2(a_i, a_j)/(a_i, a_i)``:
in ``B_n`` the last node is short (``a[n-1][n-2] = -2``), in ``C_n`` it is
long (``a[n-2][n-1] = -2``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .canonical import canonical_key
from .matrices import CartanMatrix, ExchangeMatrix, compute_symmetrizer

FAMILIES = "ABCDEFG"


@dataclass(frozen=True, order=True)
class ClusterTypeLabel:
    family: str
    rank: int

    def __post_init__(self):
        if not is_valid_label(self.family, self.rank):
            raise ValueError(f"no finite type {self.family}{self.rank}")

    def __str__(self):
        return f"{self.family}{self.rank}"

    def normalized(self) -> "ClusterTypeLabel":
        # B2 and C2 are the same type up to relabeling
        if self.family == "C" and self.rank == 2:
            return ClusterTypeLabel("B", 2)
        return self

    def same_type(self, other: "ClusterTypeLabel") -> bool:
        return self.normalized() == other.normalized()


def is_valid_label(family: str, rank: int) -> bool:
    if family == "A":
        return rank >= 1
    if family in "BC":
        return rank >= 2
    if family == "D":
        return rank >= 4
    if family == "E":
        return rank in (6, 7, 8)
    if family == "F":
        return rank == 4
    if family == "G":
        return rank == 2
    return False


def parse_label(text: str, rank: int | None = None) -> ClusterTypeLabel:
    m = re.fullmatch(r"\s*([A-Ga-g])\s*_?\s*(\d+)?\s*", text)
    if not m:
        raise ValueError(f"cannot parse type label {text!r}")
    family = m.group(1).upper()
    r = int(m.group(2)) if m.group(2) else rank
    if r is None:
        raise ValueError(f"type label {text!r} needs a rank")
    return ClusterTypeLabel(family, r)


def _edges(label: ClusterTypeLabel) -> list[tuple[int, int]]:
    n = label.rank
    if label.family in "ABCFG":
        return [(i, i + 1) for i in range(n - 1)]
    if label.family == "D":
        return [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    # E_n, Bourbaki numbering shifted to 0: 0-2-3-4-5-..., node 1 hangs off 3
    return [(0, 2), (1, 3)] + [(i, i + 1) for i in range(2, n - 1)]


def standard_cartan(label: ClusterTypeLabel) -> CartanMatrix:
    n = label.rank
    a = 2 * np.eye(n, dtype=np.int64)
    for i, j in _edges(label):
        a[i, j] = a[j, i] = -1
    if label.family == "B":
        a[n - 1, n - 2] = -2
    elif label.family == "C":
        a[n - 2, n - 1] = -2
    elif label.family == "F":
        a[2, 1] = -2
    elif label.family == "G":
        a[1, 0] = -3
    off = -(a - 2 * np.eye(n, dtype=np.int64))
    sign = np.sign(np.triu(off) - np.triu(off).T)
    return CartanMatrix(a, compute_symmetrizer(sign * off))


def two_coloring(cartan: CartanMatrix) -> list[int]:
    a = cartan.a
    n = a.shape[0]
    color = [-1] * n
    for root in range(n):
        if color[root] >= 0:
            continue
        color[root] = 0
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i != j and a[i, j] != 0:
                    if color[j] < 0:
                        color[j] = 1 - color[i]
                        stack.append(j)
                    elif color[j] == color[i]:
                        raise ValueError("diagram is not bipartite")
    return color


def bipartite_exchange_matrix(cartan: CartanMatrix, sources_first: bool = True) -> ExchangeMatrix:
    """Exchange matrix whose Cartan counterpart is ``cartan``, all color-0 nodes sources."""
    color = two_coloring(cartan)
    a = cartan.a
    n = a.shape[0]
    b = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i != j and a[i, j]:
                src = (color[i] == 0) == sources_first
                b[i, j] = -a[i, j] if src else a[i, j]
    return ExchangeMatrix(b)


def reference_matrix(label: ClusterTypeLabel) -> ExchangeMatrix:
    return bipartite_exchange_matrix(standard_cartan(label))


def linear_matrix(label: ClusterTypeLabel) -> ExchangeMatrix:
    """Acyclic orientation with every edge pointing from lower to higher index."""
    a = standard_cartan(label).a
    n = a.shape[0]
    b = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i < j and a[i, j]:
                b[i, j] = -a[i, j]
                b[j, i] = a[j, i]
    return ExchangeMatrix(b)


def labels_of_rank(n: int) -> list[ClusterTypeLabel]:
    out = []
    for fam in FAMILIES:
        if is_valid_label(fam, n):
            out.append(ClusterTypeLabel(fam, n))
    if n == 2:
        out = [lab for lab in out if not (lab.family == "C")]
    return out


@lru_cache(maxsize=None)
def _finite_cartan_keys(n: int) -> dict[tuple, ClusterTypeLabel]:
    return {canonical_key(standard_cartan(lab).a): lab for lab in labels_of_rank(n)}


def finite_type_of_cartan(cartan: CartanMatrix) -> ClusterTypeLabel | None:
    """Label of ``cartan`` if it is, up to relabeling, a connected finite-type Cartan matrix."""
    return _finite_cartan_keys(cartan.n).get(canonical_key(cartan.a))


def positive_root_count(label: ClusterTypeLabel) -> int:
    """nh/2 for the type: A n(n+1)/2, B/C n^2, D n(n-1), E6 36, E7 63, E8 120, F4 24, G2 6."""
    n = label.rank
    f = label.family
    if f == "A":
        return n * (n + 1) // 2
    if f in "BC":
        return n * n
    if f == "D":
        return n * (n - 1)
    if f == "E":
        return {6: 36, 7: 63, 8: 120}[n]
    if f == "F":
        return 24
    return 6


def coxeter_number(label: ClusterTypeLabel) -> int:
    return 2 * positive_root_count(label) // label.rank
