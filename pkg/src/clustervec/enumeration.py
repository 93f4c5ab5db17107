"""Breadth-first enumeration of seeds and of mutation classes.

Seed atlases are keyed by the (B, C, D) triple. By default the triple is
first brought to a canonical labeling (columns of C sorted), so a state is
an unlabeled seed; pass ``quotient_labels=False`` for exact labeled dedup.
Labeled atlases grow like ``clusters * n!`` and are only practical at small
rank.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .canonical import canonical_key, canonical_labeling
from .dynkin_types import ClusterTypeLabel, finite_type_of_cartan
from .errors import CapExceeded, IncompleteAtlas
from .matrices import (
    ExchangeMatrix,
    SeedState,
    cartan_counterpart,
    initial_seed,
    _guard,
    is_bipartite,
    mutate_b,
    mutate_stacked,
    mutate_seed,
)

log = logging.getLogger(__name__)

DEFAULT_SEED_CAP = 10**6
DEFAULT_CLASS_CAP = 10**5
ATLAS_SCHEMA = "clustervec.atlas/1"

Vector = tuple[int, ...]


def _stack_key(m: np.ndarray, n: int, quotient_labels: bool) -> bytes:
    if not quotient_labels:
        return m.tobytes()
    order = np.lexsort(m[2 * n - 1:n - 1:-1])
    p = m[:, order]
    p[:n] = p[:n][order]
    return p.tobytes()


def _stack(s: SeedState) -> np.ndarray:
    return np.vstack([s.b.b, s.c, s.d])


def seed_key(s: SeedState, quotient_labels: bool = True) -> bytes:
    """Dedup key: the exact triple, or the triple after sorting the columns of C."""
    return _stack_key(_stack(s), s.n, quotient_labels)


@dataclass
class SeedAtlas:
    initial: ExchangeMatrix
    states: dict[bytes, SeedState] = field(default_factory=dict)
    depth: int = 0
    complete: bool = False
    quotient_labels: bool = True

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states.values())


def enumerate_seeds(initial: ExchangeMatrix, cap: int = DEFAULT_SEED_CAP,
                    quotient_labels: bool = True) -> SeedAtlas:
    """BFS over all mutation directions (ascending, FIFO frontier) until closure.

    Raises CapExceeded, carrying the partial atlas, once more than ``cap``
    distinct states have been seen.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    atlas = SeedAtlas(initial, quotient_labels=quotient_labels)
    s0 = initial_seed(initial)
    atlas.states[seed_key(s0, quotient_labels)] = s0
    n = initial.n
    frontier = [(_stack(s0), s0.path)]
    while frontier:
        nxt = []
        for arr, path in frontier:
            _guard(arr)
            for k in range(n):
                if path and path[-1] == k:
                    continue  # the parent
                t = mutate_stacked(arr, n, k)
                key = _stack_key(t, n, quotient_labels)
                if key in atlas.states:
                    continue
                tpath = path + (k,)
                atlas.states[key] = SeedState(ExchangeMatrix(t[:n], initial.symmetrizer, check=False),
                                              t[n:2 * n], t[2 * n:], tpath)
                nxt.append((t, tpath))
                if len(atlas.states) > cap:
                    atlas.depth += 1
                    raise CapExceeded(f"seed enumeration exceeded cap {cap} at depth {atlas.depth}",
                                      partial=atlas, depth=atlas.depth)
        if nxt:
            atlas.depth += 1
        frontier = nxt
    atlas.complete = True
    log.debug("atlas closed: %d states, depth %d", len(atlas), atlas.depth)
    return atlas


@dataclass(frozen=True)
class VectorSets:
    c_all: frozenset
    c_pos: frozenset
    d_noninit: frozenset
    c_pos_bipartite: frozenset
    d_bipartite: frozenset

    def sorted(self, name: str) -> list[Vector]:
        return sorted(getattr(self, name))


def _collect(states, n: int) -> VectorSets:
    initial_d = {tuple(-int(i == j) for i in range(n)) for j in range(n)}
    c_all, d_all, c_bip, d_bip = set(), set(), set(), set()
    for s in states:
        cs = s.c_vectors()
        ds = [d for d in s.d_vectors() if d not in initial_d]
        c_all.update(cs)
        d_all.update(ds)
        if is_bipartite(s.b):
            c_bip.update(cs)
            d_bip.update(ds)
    c_pos = {c for c in c_all if any(c) and min(c) >= 0}
    return VectorSets(
        c_all=frozenset(c_all),
        c_pos=frozenset(c_pos),
        d_noninit=frozenset(d_all),
        c_pos_bipartite=frozenset(c for c in c_bip if c in c_pos),
        d_bipartite=frozenset(d_bip),
    )


def extract_vector_sets(atlas: SeedAtlas) -> VectorSets:
    if not atlas.complete:
        raise IncompleteAtlas("vector sets need a closed atlas")
    return _collect(atlas, atlas.initial.n)


@lru_cache(maxsize=4096)
def _vector_sets_cached(raw: bytes, n: int, symmetrizer: tuple) -> VectorSets:
    m = ExchangeMatrix(np.frombuffer(raw, dtype=np.int64).reshape(n, n), symmetrizer, check=False)
    return extract_vector_sets(enumerate_seeds(m))


def vector_sets_of(m: ExchangeMatrix) -> VectorSets:
    """Vector sets of a finite-type matrix, memoized per exact matrix."""
    return _vector_sets_cached(m.b.tobytes(), m.n, m.symmetrizer)


def bounded_depth_probe(initial: ExchangeMatrix, depth: int) -> VectorSets:
    """C-columns and non-initial D-columns of every seed within ``depth`` mutations.

    Depth 0 is special-cased to report nothing, so that only vectors produced
    by at least one mutation are reported.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if depth == 0:
        empty = frozenset()
        return VectorSets(empty, empty, empty, empty, empty)
    s0 = initial_seed(initial)
    seen = {s0.key(): s0}
    frontier = [s0]
    for _ in range(depth):
        nxt = []
        for s in frontier:
            for k in range(initial.n):
                t = mutate_seed(s, k)
                if t.key() not in seen:
                    seen[t.key()] = t
                    nxt.append(t)
        frontier = nxt
    return _collect(seen.values(), initial.n)


@dataclass
class MatrixClass:
    """Mutation class up to simultaneous permutation, in BFS discovery order."""

    members: list[ExchangeMatrix]
    keys: dict[tuple, int]
    complete: bool

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, m: ExchangeMatrix):
        return canonical_key(m.b) in self.keys


def enumerate_matrix_class(seed: ExchangeMatrix, cap: int = DEFAULT_CLASS_CAP,
                           stop=None) -> MatrixClass:
    """BFS on exchange matrices, deduplicated by canonical form.

    ``stop(m)`` may return True to end the search early; the class is then
    returned with ``complete=False``.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    keys = {canonical_key(seed.b): 0}
    members = [seed]
    queue = deque([seed])
    if stop is not None and stop(seed):
        return MatrixClass(members, keys, False)
    while queue:
        m = queue.popleft()
        for k in range(m.n):
            t = mutate_b(m, k)
            key = canonical_key(t.b)
            if key in keys:
                continue
            keys[key] = len(members)
            members.append(t)
            if stop is not None and stop(t):
                return MatrixClass(members, keys, False)
            if len(members) > cap:
                raise CapExceeded(f"matrix class exceeded cap {cap}",
                                  partial=MatrixClass(members, keys, False))
            queue.append(t)
    return MatrixClass(members, keys, True)


def _is_connected(m: ExchangeMatrix) -> bool:
    n = m.n
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if m.b[i, j] and j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == n


def _two_infinite(m: ExchangeMatrix) -> bool:
    return bool(np.any(np.abs(m.b) * np.abs(m.b.T) >= 4))


def detect_cluster_type(m: ExchangeMatrix, cap: int = DEFAULT_CLASS_CAP) -> ClusterTypeLabel | None:
    """Finite type of ``m``'s mutation class, or None (indeterminate).

    None is returned when the search ends without a witness: the class
    contains a pair with ``|b_ij b_ji| >= 4``, the matrix is disconnected,
    the class closes with no finite-type member, or the cap is hit.
    """
    if not _is_connected(m):
        return None
    found: list[ClusterTypeLabel] = []
    infinite = []

    def stop(x: ExchangeMatrix) -> bool:
        if _two_infinite(x):
            infinite.append(x)
            return True
        lab = finite_type_of_cartan(cartan_counterpart(x))
        if lab is not None:
            found.append(lab)
            return True
        return False

    try:
        enumerate_matrix_class(m, cap, stop=stop)
    except CapExceeded:
        return None
    return found[0] if found else None


def cluster_type_or_raise(m: ExchangeMatrix, cap: int = DEFAULT_CLASS_CAP) -> ClusterTypeLabel:
    lab = detect_cluster_type(m, cap)
    if lab is None:
        raise ValueError("matrix is not of detectable finite cluster type")
    return lab


def canonical_member_order(m: ExchangeMatrix) -> list[int]:
    return canonical_labeling(m.b)[1]


# --- atlas cache -----------------------------------------------------------

def cache_dir(explicit: str | os.PathLike | None = None) -> Path | None:
    path = explicit or os.environ.get("CLUSTERVEC_CACHE_DIR")
    return Path(path) if path else None


def atlas_cache_name(initial: ExchangeMatrix, quotient_labels: bool) -> str:
    h = hashlib.sha256(initial.b.tobytes() + bytes([initial.n, int(quotient_labels)])).hexdigest()
    return f"atlas-{h[:24]}.jsonl"


def save_atlas(atlas: SeedAtlas, path: str | os.PathLike):
    with open(path, "w") as fh:
        header = {"schema": ATLAS_SCHEMA, "initial": atlas.initial.tolist(),
                  "quotient_labels": atlas.quotient_labels, "complete": atlas.complete,
                  "depth": atlas.depth, "count": len(atlas)}
        fh.write(json.dumps(header) + "\n")
        for s in atlas:
            fh.write(json.dumps({"path": list(s.path), "b": s.b.tolist(),
                                 "c": s.c.tolist(), "d": s.d.tolist()}) + "\n")


def load_atlas(path: str | os.PathLike) -> SeedAtlas:
    with open(path) as fh:
        header = json.loads(fh.readline())
        if header.get("schema") != ATLAS_SCHEMA:
            raise ValueError(f"unsupported atlas schema {header.get('schema')!r}")
        initial = ExchangeMatrix(header["initial"])
        atlas = SeedAtlas(initial, depth=header["depth"], complete=header["complete"],
                          quotient_labels=header["quotient_labels"])
        for line in fh:
            rec = json.loads(line)
            s = SeedState(ExchangeMatrix(rec["b"], initial.symmetrizer),
                          np.array(rec["c"], dtype=np.int64), np.array(rec["d"], dtype=np.int64),
                          tuple(rec["path"]))
            atlas.states[seed_key(s, atlas.quotient_labels)] = s
    return atlas


def cached_enumerate_seeds(initial: ExchangeMatrix, cap: int = DEFAULT_SEED_CAP,
                           directory: str | os.PathLike | None = None,
                           quotient_labels: bool = True) -> SeedAtlas:
    d = cache_dir(directory)
    if d is None:
        return enumerate_seeds(initial, cap, quotient_labels)
    d.mkdir(parents=True, exist_ok=True)
    path = d / atlas_cache_name(initial, quotient_labels)
    if path.exists():
        atlas = load_atlas(path)
        if atlas.complete and atlas.initial == initial:
            return atlas
    atlas = enumerate_seeds(initial, cap, quotient_labels)
    save_atlas(atlas, path)
    return atlas
