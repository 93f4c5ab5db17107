"""Exact integer mutation of exchange, C- and D-matrices.

Conventions: c-vectors and d-vectors are the *columns* of C and D; the
initial seed has ``C = I`` and ``D = -I``. All arithmetic is done in int64
with an explicit magnitude guard, so a runaway infinite-type probe raises
``OverflowError`` instead of wrapping.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np

from .errors import MatrixParseError, NotSkewSymmetrizable

# products of two guarded entries stay below 2**56, so sums over <= 64 terms fit in int64
ENTRY_LIMIT = 2**28


def _as_int_array(rows) -> np.ndarray:
    arr = np.array(rows, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    arr.flags.writeable = False
    return arr


def _guard(*arrays):
    for a in arrays:
        if a.size and int(np.abs(a).max()) > ENTRY_LIMIT:
            raise OverflowError(f"matrix entry exceeds {ENTRY_LIMIT}; refusing to continue")


def pos(x):
    """Elementwise ``[x]_+``."""
    return np.maximum(x, 0)


def compute_symmetrizer(b) -> tuple[int, ...]:
    """Componentwise-least positive integer ``t`` with ``diag(t) @ b`` skew-symmetric."""
    b = _as_int_array(b)
    n = b.shape[0]
    if np.any(np.diag(b) != 0):
        raise NotSkewSymmetrizable("nonzero diagonal entry")
    for i in range(n):
        for j in range(i + 1, n):
            x, y = int(b[i, j]), int(b[j, i])
            if (x == 0) != (y == 0) or (x != 0 and (x > 0) == (y > 0)):
                raise NotSkewSymmetrizable(f"sign pattern violated at ({i}, {j})")

    t: list[Fraction | None] = [None] * n
    result = [0] * n
    for root in range(n):
        if t[root] is not None:
            continue
        t[root] = Fraction(1)
        component = [root]
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if b[i, j] == 0:
                    continue
                # t_i b_ij = -t_j b_ji
                want = t[i] * int(b[i, j]) / -int(b[j, i])
                if t[j] is None:
                    t[j] = want
                    component.append(j)
                    stack.append(j)
                elif t[j] != want:
                    raise NotSkewSymmetrizable(f"inconsistent ratios around vertex {j}")
        den = lcm(*(t[i].denominator for i in component))
        nums = [int(t[i] * den) for i in component]
        g = gcd(*nums)
        for i, v in zip(component, nums):
            result[i] = v // g
    return tuple(result)


class ExchangeMatrix:
    """Skew-symmetrizable integer matrix with its minimal symmetrizer."""

    __slots__ = ("b", "symmetrizer", "_key")

    def __init__(self, b, symmetrizer: Sequence[int] | None = None, check: bool = True):
        arr = _frozen(_as_int_array(b))
        if symmetrizer is None:
            symmetrizer = compute_symmetrizer(arr)
        elif check:
            t = np.array(symmetrizer, dtype=np.int64)
            if t.shape != (arr.shape[0],) or np.any(t <= 0):
                raise NotSkewSymmetrizable("symmetrizer must be a positive vector of length n")
            tb = t[:, None] * arr
            if np.any(tb != -tb.T) or np.any(np.diag(arr) != 0):
                raise NotSkewSymmetrizable("diag(t) @ b is not skew-symmetric")
        self.b = arr
        self.symmetrizer = tuple(int(x) for x in symmetrizer)
        self._key = arr.tobytes()

    @property
    def n(self) -> int:
        return self.b.shape[0]

    def __eq__(self, other):
        if not isinstance(other, ExchangeMatrix):
            return NotImplemented
        return self.b.shape == other.b.shape and self._key == other._key

    def __hash__(self):
        return hash((self.b.shape[0], self._key))

    def __repr__(self):
        return f"ExchangeMatrix({self.tolist()})"

    def tolist(self) -> list[list[int]]:
        return self.b.tolist()

    def is_skew_symmetric(self) -> bool:
        return bool(np.all(self.b == -self.b.T))

    def permuted(self, order: Sequence[int]) -> "ExchangeMatrix":
        """Matrix with new index ``p`` carrying old index ``order[p]``."""
        o = np.asarray(order)
        return ExchangeMatrix(self.b[np.ix_(o, o)], [self.symmetrizer[i] for i in o], check=False)

    def abs_pattern(self) -> bytes:
        return np.abs(self.b).tobytes()


@dataclass(frozen=True)
class CartanMatrix:
    a: np.ndarray
    symmetrizer: tuple[int, ...]

    def __post_init__(self):
        a = _frozen(_as_int_array(self.a))
        object.__setattr__(self, "a", a)
        if np.any(np.diag(a) != 2):
            raise ValueError("Cartan matrix needs 2 on the diagonal")
        off = a - np.diag(np.diag(a))
        if np.any(off > 0):
            raise ValueError("Cartan off-diagonal entries must be <= 0")
        t = np.array(self.symmetrizer, dtype=np.int64)
        ta = t[:, None] * a
        if np.any(ta != ta.T):
            raise ValueError("Cartan matrix is not symmetrized by the given vector")

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def __eq__(self, other):
        if not isinstance(other, CartanMatrix):
            return NotImplemented
        return self.a.shape == other.a.shape and np.array_equal(self.a, other.a)

    def __hash__(self):
        return hash(self.a.tobytes())


def cartan_counterpart(m: ExchangeMatrix) -> CartanMatrix:
    a = -np.abs(m.b)
    np.fill_diagonal(a, 2)
    return CartanMatrix(a, m.symmetrizer)


def _check_index(n: int, k: int):
    if not 0 <= k < n:
        raise IndexError(f"mutation index {k} out of range for rank {n}")


def mutate_b_array(b: np.ndarray, k: int) -> np.ndarray:
    col = b[:, k]
    row = b[k, :]
    out = b + np.outer(col, pos(row)) + np.outer(pos(-col), row)
    out[k, :] = -row
    out[:, k] = -col
    return out


def mutate_c_array(c: np.ndarray, b: np.ndarray, k: int) -> np.ndarray:
    # tropical y-mutation; b is the exchange matrix *before* mutation
    ck = c[:, k]
    row = b[k, :]
    out = c + np.outer(ck, pos(row)) + np.outer(pos(-ck), row)
    out[:, k] = -ck
    return out


def mutate_d_array(d: np.ndarray, b: np.ndarray, k: int) -> np.ndarray:
    bk = b[:, k]
    out = d.copy()
    out[:, k] = -d[:, k] + np.maximum(d @ pos(bk), d @ pos(-bk))
    return out


def mutate_stacked(m: np.ndarray, n: int, k: int) -> np.ndarray:
    """One mutation of the stacked ``3n x n`` array ``[B; C; D]``.

    Same result as mutating B, C and D separately; used by the enumerators,
    which only build SeedState objects for new states.
    """
    bc = m[: 2 * n]
    col = bc[:, k]
    row = bc[k]
    out = np.empty_like(m)
    nbc = out[: 2 * n]
    np.add(bc, col[:, None] * np.maximum(row, 0), out=nbc)
    nbc += np.maximum(-col, 0)[:, None] * row
    nbc[:, k] = -col
    nbc[k] = -row
    d = m[2 * n:]
    bk = m[:n, k]
    out[2 * n:] = d
    out[2 * n:, k] = -d[:, k] + np.maximum(d @ np.maximum(bk, 0), d @ np.maximum(-bk, 0))
    return out


def mutate_b(m: ExchangeMatrix, k: int) -> ExchangeMatrix:
    _check_index(m.n, k)
    _guard(m.b)
    return ExchangeMatrix(mutate_b_array(m.b, k), m.symmetrizer, check=False)


@dataclass(frozen=True, eq=False)
class SeedState:
    """Labeled vertex of the exchange pattern with principal coefficients."""

    b: ExchangeMatrix
    c: np.ndarray
    d: np.ndarray
    path: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "c", _frozen(self.c))
        object.__setattr__(self, "d", _frozen(self.d))

    @property
    def n(self) -> int:
        return self.b.n

    def key(self) -> bytes:
        return self.b.b.tobytes() + self.c.tobytes() + self.d.tobytes()

    def same_data(self, other: "SeedState") -> bool:
        return self.key() == other.key()

    def c_vectors(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in col) for col in self.c.T]

    def d_vectors(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in col) for col in self.d.T]

    def relabeled(self, order: Sequence[int]) -> "SeedState":
        o = np.asarray(order)
        return SeedState(self.b.permuted(o), self.c[:, o], self.d[:, o], self.path)


def initial_seed(m: ExchangeMatrix) -> SeedState:
    n = m.n
    eye = np.eye(n, dtype=np.int64)
    return SeedState(m, eye, -eye, ())


def mutate_seed(s: SeedState, k: int) -> SeedState:
    """Mutate B, C and D in direction ``k``; the path is kept as a reduced word."""
    _check_index(s.n, k)
    b = s.b.b
    _guard(b, s.c, s.d)
    nb = ExchangeMatrix(mutate_b_array(b, k), s.b.symmetrizer, check=False)
    nc = mutate_c_array(s.c, b, k)
    nd = mutate_d_array(s.d, b, k)
    path = s.path[:-1] if s.path and s.path[-1] == k else s.path + (k,)
    return SeedState(nb, nc, nd, path)


def mutate_along(m: ExchangeMatrix | SeedState, path: Sequence[int]):
    s = m
    for k in path:
        s = mutate_seed(s, k) if isinstance(s, SeedState) else mutate_b(s, k)
    return s


def is_bipartite(m: ExchangeMatrix) -> bool:
    b = m.b
    for i in range(b.shape[0]):
        row = b[i]
        if np.any(row > 0) and np.any(row < 0):
            return False
    return True


def is_sign_coherent(v) -> bool:
    v = np.asarray(v)
    if not np.any(v):
        return False
    return bool(np.all(v >= 0) or np.all(v <= 0))


def parse_matrix(text: str) -> list[list[int]]:
    """Parse either whitespace-separated rows or ``{"rank": n, "b": [[...]]}``."""
    stripped = text.strip()
    if not stripped:
        raise MatrixParseError("empty matrix input")
    if stripped[0] in "{[":
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise MatrixParseError(f"bad JSON matrix: {exc}") from exc
        rows = obj["b"] if isinstance(obj, dict) else obj
        if isinstance(obj, dict) and "rank" in obj and obj["rank"] != len(rows):
            raise MatrixParseError(f"rank {obj['rank']} does not match {len(rows)} rows")
    else:
        try:
            rows = [[int(tok) for tok in line.replace(",", " ").split()]
                    for line in stripped.splitlines() if line.strip() and not line.lstrip().startswith("#")]
        except ValueError as exc:
            raise MatrixParseError(str(exc)) from exc
    if not rows or any(len(r) != len(rows) for r in rows):
        raise MatrixParseError("matrix must be square")
    return [[int(x) for x in r] for r in rows]


def load_exchange_matrix(text: str) -> ExchangeMatrix:
    return ExchangeMatrix(parse_matrix(text))


def format_matrix(m) -> str:
    arr = m.b if isinstance(m, ExchangeMatrix) else np.asarray(m)
    width = max(len(str(int(x))) for x in arr.flat) if arr.size else 1
    return "\n".join(" ".join(str(int(x)).rjust(width) for x in row) for row in arr)


def matrix_to_json(m: ExchangeMatrix) -> dict:
    return {"rank": m.n, "b": m.tolist()}
