"""Admissible automorphisms, orbit mutations and folding of B, C and D matrices."""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .canonical import isomorphism
from .dynkin_types import ClusterTypeLabel, bipartite_exchange_matrix, standard_cartan
from .enumeration import DEFAULT_CLASS_CAP, detect_cluster_type
from .errors import NotAdmissible, NotFoldedType, RepresentativeDependent, SignConditionViolated
from .matrices import (
    CartanMatrix,
    ExchangeMatrix,
    SeedState,
    compute_symmetrizer,
    initial_seed,
    mutate_b,
    mutate_seed,
)


@dataclass(frozen=True)
class OrbitAutomorphism:
    """A permutation of ``range(n)``; orbits are listed by their minimal member."""

    sigma: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.sigma) != list(range(len(self.sigma))):
            raise ValueError(f"{self.sigma} is not a permutation")

    @property
    def n(self) -> int:
        return len(self.sigma)

    @property
    def orbits(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for i in range(self.n):
            if i in seen:
                continue
            orb = [i]
            j = self.sigma[i]
            while j != i:
                orb.append(j)
                j = self.sigma[j]
            seen.update(orb)
            out.append(tuple(sorted(orb)))
        return out

    def orbit_of(self, i: int) -> int:
        for idx, orb in enumerate(self.orbits):
            if i in orb:
                return idx
        raise IndexError(i)

    @classmethod
    def identity(cls, n: int) -> "OrbitAutomorphism":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], n: int) -> "OrbitAutomorphism":
        sigma = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                sigma[a] = b
        return cls(tuple(sigma))

    @classmethod
    def parse(cls, text: str, n: int) -> "OrbitAutomorphism":
        """1-based cycle notation: ``"(3 4)"``, ``"(1,5)(2,4)"``, or ``"(34)"`` when n < 10."""
        cycles = []
        for body in re.findall(r"\(([^)]*)\)", text):
            toks = re.split(r"[\s,]+", body.strip())
            if len(toks) == 1 and n < 10:
                toks = list(toks[0])
            cyc = [int(t) - 1 for t in toks if t]
            if any(not 0 <= c < n for c in cyc) or len(set(cyc)) != len(cyc):
                raise ValueError(f"bad cycle {body!r} for n={n}")
            cycles.append(cyc)
        if not cycles and text.strip() not in ("", "()", "id"):
            raise ValueError(f"cannot parse permutation {text!r}")
        return cls.from_cycles(cycles, n)

    def cycle_string(self) -> str:
        parts = []
        for orb in self.orbits:
            if len(orb) > 1:
                cyc = [orb[0]]
                while self.sigma[cyc[-1]] != orb[0]:
                    cyc.append(self.sigma[cyc[-1]])
                parts.append("(" + " ".join(str(i + 1) for i in cyc) + ")")
        return "".join(parts) or "()"


def is_admissible(m: ExchangeMatrix, sigma: OrbitAutomorphism) -> bool:
    b = m.b
    s = np.asarray(sigma.sigma)
    if sigma.n != m.n or not np.array_equal(b[np.ix_(s, s)], b):
        return False
    for orb in sigma.orbits:
        rows = b[list(orb)]
        if np.any(rows.max(axis=0) * rows.min(axis=0) < 0):
            return False
        if np.any(b[np.ix_(orb, orb)] != 0):
            return False
    return True


def _orbit_members(sigma: OrbitAutomorphism, orbit) -> tuple[int, ...]:
    if isinstance(orbit, (int, np.integer)):
        return sigma.orbits[int(orbit)]
    members = tuple(sorted(orbit))
    if members not in sigma.orbits:
        raise ValueError(f"{members} is not an orbit of {sigma.cycle_string()}")
    return members


def orbit_mutate(m: ExchangeMatrix, sigma: OrbitAutomorphism, orbit) -> ExchangeMatrix:
    """Product of the (commuting) mutations over one orbit; ``orbit`` is an index or a member set."""
    if not is_admissible(m, sigma):
        raise NotAdmissible("sigma is not admissible for the matrix")
    for t in _orbit_members(sigma, orbit):
        m = mutate_b(m, t)
    if not is_admissible(m, sigma):
        raise NotAdmissible("admissibility lost after orbit mutation")
    return m


def orbit_mutate_seed(s: SeedState, sigma: OrbitAutomorphism, orbit) -> SeedState:
    if not is_admissible(s.b, sigma):
        raise NotAdmissible("sigma is not admissible for the matrix")
    for t in _orbit_members(sigma, orbit):
        s = mutate_seed(s, t)
    if not is_admissible(s.b, sigma):
        raise NotAdmissible("admissibility lost after orbit mutation")
    return s


def _fold_rows(x: np.ndarray, orbits) -> np.ndarray:
    return np.array([x[list(orb)].sum(axis=0) for orb in orbits], dtype=np.int64)


def _fold_square(x: np.ndarray, sigma: OrbitAutomorphism) -> np.ndarray:
    orbits = sigma.orbits
    rows = _fold_rows(x, orbits)
    out = rows[:, [orb[0] for orb in orbits]]
    for orb in orbits:
        for j in orb[1:]:
            if not np.array_equal(rows[:, j], rows[:, orb[0]]):
                raise RepresentativeDependent(f"column {j} disagrees with representative {orb[0]}")
    return out


def _check_invariant(x: np.ndarray, sigma: OrbitAutomorphism, what: str):
    s = np.asarray(sigma.sigma)
    if not np.array_equal(x[np.ix_(s, s)], x):
        raise SignConditionViolated(f"{what} is not sigma-invariant")


def fold_matrix(m: ExchangeMatrix, sigma: OrbitAutomorphism) -> ExchangeMatrix:
    if not is_admissible(m, sigma):
        raise NotAdmissible("sigma is not admissible for the matrix")
    return ExchangeMatrix(_fold_square(m.b, sigma))


def _weak_sign_agrees(rows: np.ndarray) -> bool:
    return not np.any(rows.max(axis=0) * rows.min(axis=0) < 0)


def fold_c_matrix(c: np.ndarray, sigma: OrbitAutomorphism) -> np.ndarray:
    c = np.asarray(c, dtype=np.int64)
    _check_invariant(c, sigma, "C-matrix")
    for orb in sigma.orbits:
        if not _weak_sign_agrees(c[list(orb)]):
            raise SignConditionViolated(f"c-entries of orbit {orb} differ in sign")
    return _fold_square(c, sigma)


def fold_d_matrix(d: np.ndarray, sigma: OrbitAutomorphism, b: ExchangeMatrix,
                  directions: Sequence[int] | None = None) -> np.ndarray:
    """Fold a D-matrix, checking the sign condition on ``(D B)_{sk}`` for each ``k`` in ``directions``.

    ``directions`` defaults to every index.
    """
    d = np.asarray(d, dtype=np.int64)
    _check_invariant(d, sigma, "D-matrix")
    db = d @ b.b
    cols = list(range(d.shape[0])) if directions is None else list(directions)
    for orb in sigma.orbits:
        if not _weak_sign_agrees(db[np.ix_(list(orb), cols)]):
            raise SignConditionViolated(f"sum_t d_st b_tk changes sign over orbit {orb}")
    return _fold_square(d, sigma)


def fold_seed(s: SeedState, sigma: OrbitAutomorphism, directions=None) -> SeedState:
    return SeedState(fold_matrix(s.b, sigma), fold_c_matrix(s.c, sigma),
                     fold_d_matrix(s.d, sigma, s.b, directions), ())


def fold_cartan(a: CartanMatrix, sigma: OrbitAutomorphism) -> CartanMatrix:
    folded = _fold_square(a.a, sigma)
    off = -(folded - np.diag(np.diag(folded)))
    sign = np.sign(np.triu(off) - np.triu(off).T)
    return CartanMatrix(folded, compute_symmetrizer(sign * off))


@dataclass(frozen=True)
class FoldedContext:
    unfolded: ExchangeMatrix
    sigma: OrbitAutomorphism
    folded: ExchangeMatrix


def _standard_unfolding(z: ClusterTypeLabel) -> tuple[ExchangeMatrix, OrbitAutomorphism]:
    n = z.rank
    if z.family == "C" or n == 2:
        big = ClusterTypeLabel("A", 2 * n - 1)
        sigma = tuple(2 * n - 2 - i for i in range(2 * n - 1))
    else:
        big = ClusterTypeLabel("D", n + 1)
        sigma = tuple(range(n - 1)) + (n, n - 1)
    return bipartite_exchange_matrix(standard_cartan(big)), OrbitAutomorphism(sigma)


def _relabel_to(b: ExchangeMatrix, sigma: OrbitAutomorphism, f: dict[int, int]):
    """Relabel so that orbit ``i`` of ``sigma`` becomes orbit ``f[i]``."""
    orbits = sigma.orbits
    order: list[int] = []
    for target in range(len(orbits)):
        src = next(i for i, t in f.items() if t == target)
        order.extend(orbits[src])
    new_of = {old: new for new, old in enumerate(order)}
    new_sigma = [0] * len(order)
    for old, new in new_of.items():
        new_sigma[new] = new_of[sigma.sigma[old]]
    return b.permuted(order), OrbitAutomorphism(tuple(new_sigma))


def unfold_type(folded: ExchangeMatrix, cap: int = DEFAULT_CLASS_CAP) -> tuple[ExchangeMatrix, OrbitAutomorphism]:
    """A sigma-invariant D_{n+1} or A_{2n-1} matrix whose fold is exactly ``folded``.

    Searches the orbit-mutation graph of the standard bipartite unfolded
    matrix until a member folds to ``folded`` up to relabeling, then relabels.
    """
    z = detect_cluster_type(folded, cap)
    if z is None or z.family not in "BC":
        raise NotFoldedType(f"matrix of type {z} is not of type B or C")
    start, sigma = _standard_unfolding(z)
    seen = {start}
    queue = deque([start])
    while queue:
        b = queue.popleft()
        f = isomorphism(fold_matrix(b, sigma).b, folded.b)
        if f is not None:
            out, new_sigma = _relabel_to(b, sigma, f)
            if fold_matrix(out, new_sigma) == folded:
                return out, new_sigma
        for k in range(len(sigma.orbits)):
            t = orbit_mutate(b, sigma, k)
            if t not in seen:
                if len(seen) >= cap:
                    raise NotFoldedType("orbit-mutation search exceeded its cap")
                seen.add(t)
                queue.append(t)
    raise NotFoldedType("no unfolding found in the orbit-mutation class")


@dataclass
class WalkStep:
    orbit: int
    b_commutes: bool
    c_commutes: bool
    d_commutes: bool
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.b_commutes and self.c_commutes and self.d_commutes and self.error is None


@dataclass
class CommutationWalk:
    unfolded: ExchangeMatrix
    sigma: OrbitAutomorphism
    folded: ExchangeMatrix
    initial_c_identity: bool
    steps: list[WalkStep]

    @property
    def ok(self) -> bool:
        return self.initial_c_identity and all(s.ok for s in self.steps)

    def to_json(self) -> dict:
        return {
            "unfolded": self.unfolded.tolist(),
            "sigma": self.sigma.cycle_string(),
            "folded": self.folded.tolist(),
            "initial_c_identity": self.initial_c_identity,
            "steps": [dict(vars(s), ok=s.ok) for s in self.steps],
            "ok": self.ok,
        }


def commutation_walk(m: ExchangeMatrix, sigma: OrbitAutomorphism, steps: int = 20,
                     rng_seed: int = 0) -> CommutationWalk:
    """Random orbit-mutation walk comparing folded unfolded seeds with the folded algebra.

    At every step the folded (B, C, D) of the unfolded seed must equal the
    seed reached by ordinary mutation of the folded matrix.
    """
    rng = np.random.default_rng(rng_seed)
    s = initial_seed(m)
    folded = fold_seed(s, sigma)
    t = initial_seed(folded.b)
    init_ok = bool(np.array_equal(folded.c, np.eye(len(sigma.orbits), dtype=np.int64)))
    log: list[WalkStep] = []
    prev = None
    for _ in range(steps):
        choices = [k for k in range(len(sigma.orbits)) if k != prev] or [0]
        k = int(rng.choice(choices))
        prev = k
        s = orbit_mutate_seed(s, sigma, k)
        t = mutate_seed(t, k)
        try:
            f = fold_seed(s, sigma)
        except (SignConditionViolated, RepresentativeDependent) as exc:
            log.append(WalkStep(k, False, False, False, str(exc)))
            continue
        log.append(WalkStep(k, f.b == t.b, bool(np.array_equal(f.c, t.c)),
                            bool(np.array_equal(f.d, t.d))))
    return CommutationWalk(m, sigma, fold_matrix(m, sigma), init_ok, log)
