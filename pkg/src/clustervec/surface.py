"""Polygon (type A) and once-punctured disk (type D) models: tagged arcs, flips, laminations.

Everything is computed in a universal cover: the upper half plane with the
marked boundary points at the integers and, for the punctured disk, the
puncture at the cusp ``inf`` with deck translation ``x -> x + n``. A chord
from ``p`` to ``q`` in the punctured disk is the arc whose puncture-free
side contains the boundary points met going counterclockwise from ``p`` to
``q``; its base lift is the semicircle ``[p, p + (q - p) mod n]``. A radius
at ``p`` lifts to the vertical lines over ``p + kn``. Two geodesics cross
iff their endpoints interleave on the circle ``R u {inf}``.

A notched radius that shares its endpoint with a plain radius is replaced
by the loop around the puncture (lift ``[p, p + n]``) to obtain an ideal
triangulation; an all-notched triangulation is handled by flipping every tag
and every spiral direction.
"""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .dynkin_types import ClusterTypeLabel
from .errors import ArcNotInTriangulation, NotFound, UnsupportedTagConfiguration
from .matrices import ExchangeMatrix, initial_seed, is_bipartite, mutate_b, mutate_seed

INF = float("inf")
FAR = 1e9  # where spiralling laminations end, beyond every vertex in play
SLIDE = 0.25  # lamination endpoints sit just clockwise of the marked points

TRIANGULATION_SCHEMA = "clustervec.triangulation/1"


@dataclass(frozen=True)
class MarkedSurface:
    boundary_count: int
    punctured: bool

    def __post_init__(self):
        if self.boundary_count < (4 if self.punctured else 4):
            raise ValueError("too few marked points")

    @property
    def rank(self) -> int:
        return self.boundary_count if self.punctured else self.boundary_count - 3

    @classmethod
    def of_type(cls, label: ClusterTypeLabel | str) -> "MarkedSurface":
        if isinstance(label, str):
            from .dynkin_types import parse_label
            label = parse_label(label)
        if label.family == "A":
            return cls(label.rank + 3, False)
        if label.family == "D":
            return cls(label.rank, True)
        raise ValueError(f"no surface model for type {label}")

    def label(self) -> ClusterTypeLabel:
        return ClusterTypeLabel("D" if self.punctured else "A", self.rank)

    def arcs(self) -> list["TaggedArc"]:
        m = self.boundary_count
        out = []
        if self.punctured:
            for p in range(m):
                for delta in range(2, m):
                    out.append(TaggedArc.chord(p, (p + delta) % m))
            for p in range(m):
                out.append(TaggedArc.radius(p))
                out.append(TaggedArc.radius(p, notched=True))
        else:
            for p in range(m):
                for q in range(p + 2, m):
                    if (p, q) != (0, m - 1):
                        out.append(TaggedArc.chord(p, q))
        return out

    def is_valid(self, a: "TaggedArc") -> bool:
        m = self.boundary_count
        if not (0 <= a.p < m):
            return False
        if a.kind == "radius":
            return self.punctured
        if not 0 <= a.q < m or a.p == a.q:
            return False
        if self.punctured:
            return (a.q - a.p) % m >= 2
        return a.p < a.q and a.q - a.p >= 2 and (a.p, a.q) != (0, m - 1)


@dataclass(frozen=True, order=True)
class TaggedArc:
    kind: str
    p: int
    q: int = -1
    notched: bool = False

    @classmethod
    def chord(cls, p: int, q: int) -> "TaggedArc":
        return cls("chord", p, q)

    @classmethod
    def radius(cls, p: int, notched: bool = False) -> "TaggedArc":
        return cls("radius", p, -1, notched)

    def dual(self) -> "TaggedArc":
        if self.kind == "radius":
            return TaggedArc.radius(self.p, not self.notched)
        return self

    def __str__(self):
        if self.kind == "chord":
            return f"({self.p},{self.q})"
        return f"r{self.p}{'*' if self.notched else ''}"

    def to_json(self) -> dict:
        if self.kind == "chord":
            return {"kind": "chord", "p": self.p, "q": self.q}
        return {"kind": "radius", "p": self.p, "tag": "notched" if self.notched else "plain"}

    @classmethod
    def from_json(cls, obj: dict) -> "TaggedArc":
        if obj["kind"] == "chord":
            return cls.chord(obj["p"], obj["q"])
        return cls.radius(obj["p"], obj.get("tag") == "notched")


def _chord_lift(a: TaggedArc, s: MarkedSurface) -> tuple[int, int]:
    if s.punctured:
        return a.p, a.p + (a.q - a.p) % s.boundary_count
    return a.p, a.q


def _crosses(e1, e2) -> bool:
    a, b = sorted(e1)
    c, d = sorted(e2)
    return a < c < b < d or c < a < d < b


def _shifts(s: MarkedSurface, lo: float, hi: float) -> range:
    """Translations ``k`` worth trying when lifts spanning ``[lo, hi]`` meet a fixed lift."""
    if not s.punctured:
        return range(0, 1)
    n = s.boundary_count
    return range(int(np.floor(lo / n)) - 2, int(np.ceil(hi / n)) + 3)


@lru_cache(maxsize=1 << 16)
def intersection_pairing(a: TaggedArc, b: TaggedArc, s: MarkedSurface) -> int:
    if a == b:
        return -1
    if a.kind == "radius" and b.kind == "radius":
        if a.p == b.p:
            return 0
        return int(a.notched != b.notched)
    n = s.boundary_count
    if a.kind == "radius":
        a, b = b, a
    lo, hi = _chord_lift(a, s)
    if b.kind == "radius":
        return sum(1 for k in _shifts(s, lo - b.p, hi - b.p) if lo < b.p + k * n < hi)
    c, d = _chord_lift(b, s)
    if not s.punctured:
        return int(_crosses((lo, hi), (c, d)))
    return sum(1 for k in _shifts(s, lo - d, hi - c) if _crosses((lo, hi), (c + k * n, d + k * n)))


def compatible(a: TaggedArc, b: TaggedArc, s: MarkedSurface) -> bool:
    return intersection_pairing(a, b, s) <= 0


class Triangulation:
    """Ordered tuple of pairwise compatible tagged arcs; position ``i`` is seed index ``i``."""

    __slots__ = ("surface", "arcs", "_set")

    def __init__(self, surface: MarkedSurface, arcs: Sequence[TaggedArc], check: bool = True):
        self.surface = surface
        self.arcs = tuple(arcs)
        self._set = frozenset(self.arcs)
        if check:
            if len(self._set) != len(self.arcs) or len(self.arcs) != surface.rank:
                raise ValueError(f"a triangulation needs {surface.rank} distinct arcs")
            for a in self.arcs:
                if not surface.is_valid(a):
                    raise ValueError(f"invalid arc {a}")
            for a, b in itertools.combinations(self.arcs, 2):
                if not compatible(a, b, surface):
                    raise ValueError(f"arcs {a} and {b} cross")

    @property
    def n(self) -> int:
        return len(self.arcs)

    def key(self) -> frozenset:
        return self._set

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self.surface == other.surface and self.arcs == other.arcs

    def __hash__(self):
        return hash((self.surface, self.arcs))

    def __repr__(self):
        return f"Triangulation({', '.join(map(str, self.arcs))})"

    def index(self, a: TaggedArc) -> int:
        try:
            return self.arcs.index(a)
        except ValueError:
            raise ArcNotInTriangulation(f"{a} is not in {self}") from None

    def dual(self) -> "Triangulation":
        return Triangulation(self.surface, [a.dual() for a in self.arcs], check=False)

    def relabeled(self, order: Sequence[int]) -> "Triangulation":
        return Triangulation(self.surface, [self.arcs[i] for i in order], check=False)

    def to_json(self) -> dict:
        return {"schema": TRIANGULATION_SCHEMA,
                "boundary_count": self.surface.boundary_count,
                "punctured": self.surface.punctured,
                "arcs": [a.to_json() for a in self.arcs]}

    @classmethod
    def from_json(cls, obj: dict) -> "Triangulation":
        s = MarkedSurface(obj["boundary_count"], obj["punctured"])
        return cls(s, [TaggedArc.from_json(a) for a in obj["arcs"]])


def initial_triangulation(s: MarkedSurface) -> Triangulation:
    """Fan at vertex 0 for polygons, all plain radii for the punctured disk."""
    if s.punctured:
        return Triangulation(s, [TaggedArc.radius(p) for p in range(s.boundary_count)])
    return Triangulation(s, [TaggedArc.chord(0, q) for q in range(2, s.boundary_count - 1)])


@lru_cache(maxsize=1 << 16)
def _flip_partner(s: MarkedSurface, arcs: frozenset, a: TaggedArc) -> TaggedArc:
    rest = [x for x in arcs if x != a]
    cands = [c for c in _surface_arcs(s) if c not in arcs and all(compatible(c, x, s) for x in rest)]
    if len(cands) != 1:
        raise AssertionError(f"flip of {a} has {len(cands)} candidates")
    return cands[0]


@lru_cache(maxsize=None)
def _surface_arcs(s: MarkedSurface) -> tuple[TaggedArc, ...]:
    return tuple(s.arcs())


def flip(t: Triangulation, a: TaggedArc) -> tuple[Triangulation, TaggedArc]:
    """Replace ``a`` by the unique other arc compatible with the rest of ``t``."""
    k = t.index(a)
    new_arc = _flip_partner(t.surface, t.key(), a)
    new = list(t.arcs)
    new[k] = new_arc
    return Triangulation(t.surface, new, check=False), new_arc


def flip_at(t: Triangulation, k: int) -> Triangulation:
    return flip(t, t.arcs[k])[0]


# --- ideal triangulation in the cover ------------------------------------

def _tag_mode(t: Triangulation) -> str:
    radii = [a for a in t.arcs if a.kind == "radius"]
    notched = [a for a in radii if a.notched]
    if not notched:
        return "plain"
    if len(notched) == len(radii):
        return "dual"
    if len(radii) == 2 and radii[0].p == radii[1].p:
        return "pair"
    raise UnsupportedTagConfiguration(f"tag pattern of {t} is not reducible")


@lru_cache(maxsize=4096)
def _ideal(s: MarkedSurface, arcs: frozenset) -> "_Ideal":
    return _Ideal(s, arcs)


class _Ideal:
    """Ideal triangulation lifted to the cover; the arcs must not be all notched."""

    def __init__(self, s: MarkedSurface, arcs: Iterable[TaggedArc]):
        self.s = s
        self.n = self.s.boundary_count
        # edge representatives: (lo, hi, id)
        reps = []
        for a in sorted(arcs):
            if a.kind == "chord":
                lo, hi = _chord_lift(a, self.s)
                reps.append((lo, hi, ("chord", a.p, a.q)))
            elif a.notched:
                reps.append((a.p, a.p + self.n, ("loop", a.p)))
            else:
                reps.append((a.p, INF, ("radius", a.p)))
        if self.s.punctured:
            reps += [(i, i + 1, None) for i in range(self.n)]
        else:
            reps += [(i, i + 1, None) for i in range(self.n - 1)] + [(0, self.n - 1, None)]
        self.reps = reps
        self._nb: dict[int, list] = {}
        self._quads: dict = {}

    def neighbours(self, u: int) -> list:
        if u in self._nb:
            return self._nb[u]
        out = set()
        for lo, hi, _ in self.reps:
            if self.s.punctured:
                if (u - lo) % self.n == 0:
                    out.add(INF if hi == INF else hi + (u - lo))
                if hi != INF and (u - hi) % self.n == 0:
                    out.add(lo + (u - hi))
            else:
                if lo == u:
                    out.add(hi)
                if hi == u:
                    out.add(lo)

        def rot(w):
            if w == INF:
                return (1, 0)
            return (0, w) if w > u else (2, w)

        res = sorted(out, key=rot)
        self._nb[u] = res
        return res

    def quadrilateral(self, lo: int, hi) -> tuple:
        """Vertices ``(v0, v1, v2, v3)`` counterclockwise with the diagonal ``(v0, v2)``."""
        if (lo, hi) not in self._quads:
            self._quads[lo, hi] = self._quadrilateral(lo, hi)
        return self._quads[lo, hi]

    def _quadrilateral(self, lo: int, hi) -> tuple:
        nb = self.neighbours(lo)
        i = nb.index(hi)
        x, y = nb[i - 1], nb[i + 1]
        q = sorted({lo, hi, x, y})
        if len(q) != 4:
            raise AssertionError("degenerate quadrilateral")
        if {q[0], q[2]} == {lo, hi}:
            return tuple(q)
        return (q[1], q[2], q[3], q[0])

    def edge_id(self, x, y):
        lo, hi = min(x, y), max(x, y)
        if self.s.punctured:
            k = lo // self.n
            lo -= k * self.n
            if hi != INF:
                hi -= k * self.n
            if hi == INF:
                return ("radius", lo)
            if hi - lo == 1:
                return None
            if hi - lo == self.n:
                return ("loop", lo)
            return ("chord", lo, hi % self.n)
        if hi - lo == 1 or (lo, hi) == (0, self.n - 1):
            return None
        return ("chord", lo, hi)

    def faces(self) -> set[tuple]:
        out = set()
        for lo, hi, ident in self.reps:
            if ident is None:
                continue
            nb = self.neighbours(lo)
            i = nb.index(hi)
            for tri in ((lo, nb[i - 1], hi), (lo, hi, nb[i + 1])):
                tri = sorted(tri)
                if self.s.punctured:
                    k = tri[0] // self.n
                    tri = [v if v == INF else v - k * self.n for v in tri]
                out.add(tuple(tri))
        return out


def _arc_ids(t: Triangulation) -> dict:
    ids = {}
    for i, a in enumerate(t.arcs):
        if a.kind == "chord":
            ids[("chord", a.p, a.q)] = i
        elif a.notched:
            ids[("loop", a.p)] = i
        else:
            ids[("radius", a.p)] = i
    return ids


def b_matrix_of(t: Triangulation) -> ExchangeMatrix:
    mode = _tag_mode(t)
    if mode == "dual":
        return b_matrix_of(t.dual())
    ideal = _ideal(t.surface, t.key())
    ids = _arc_ids(t)
    n = t.n
    b = np.zeros((n, n), dtype=np.int64)
    for tri in ideal.faces():
        sides = [ideal.edge_id(tri[0], tri[1]), ideal.edge_id(tri[1], tri[2]), ideal.edge_id(tri[2], tri[0])]
        real = [x for x in sides if x is not None]
        if len(set(real)) < len(real):
            continue  # self-folded
        s0, s1, s2 = (ids.get(x) if x is not None else None for x in sides)
        for u, v in ((s0, s2), (s2, s1), (s1, s0)):
            if u is not None and v is not None:
                b[u, v] += 1
                b[v, u] -= 1
    if mode == "pair":
        radius = next(i for i, a in enumerate(t.arcs) if a.kind == "radius" and not a.notched)
        loop = next(i for i, a in enumerate(t.arcs) if a.kind == "radius" and a.notched)
        b[radius, :] = b[loop, :]
        b[:, radius] = b[:, loop]
        b[radius, loop] = b[loop, radius] = 0
    return ExchangeMatrix(b)


@dataclass(frozen=True)
class Lamination:
    """Elementary lamination of an arc: endpoints slid clockwise, radii spiral."""

    arc: TaggedArc
    surface: MarkedSurface
    reversed_spiral: bool = False

    def dual(self) -> "Lamination":
        return Lamination(self.arc, self.surface, not self.reversed_spiral)

    def lift(self) -> tuple[float, float]:
        a = self.arc
        if a.kind == "chord":
            lo, hi = _chord_lift(a, self.surface)
            return lo - SLIDE, hi - SLIDE
        # plain spirals counterclockwise: towards +x in the cover
        ccw = (not a.notched) != self.reversed_spiral
        return (a.p - SLIDE, FAR) if ccw else (-FAR, a.p - SLIDE)


def elementary_lamination(a: TaggedArc, s: MarkedSurface) -> Lamination:
    return Lamination(a, s)


def multilamination(t: Triangulation) -> list[Lamination]:
    return [Lamination(a, t.surface) for a in t.arcs]


def _shear_at(ideal: _Ideal, lam: Lamination, lo: int, hi) -> int:
    v = ideal.quadrilateral(lo, hi)
    sides = [(v[0], v[1]), (v[1], v[2]), (v[2], v[3]), (v[3], v[0])]
    l0, l1 = lam.lift()
    finite_lam = [x for x in (l0, l1) if abs(x) < FAR]
    finite_v = [x for x in v if x != INF]
    n = ideal.n
    total = 0
    for k in _shifts(ideal.s, min(finite_v) - max(finite_lam), max(finite_v) - min(finite_lam)):
        seg = tuple(x + k * n if abs(x) < FAR else x for x in (l0, l1))
        hit = [_crosses(seg, sd) for sd in sides]
        if hit[1] and hit[3]:
            total += 1
        elif hit[0] and hit[2]:
            total -= 1
    return total


def shear_coordinate(lam: Lamination, t: Triangulation, a: TaggedArc) -> int:
    mode = _tag_mode(t)
    if mode == "dual":
        return shear_coordinate(lam.dual(), t.dual(), a.dual())
    t.index(a)
    ideal = _ideal(t.surface, t.key())
    n = ideal.n
    if a.kind == "radius":
        if mode == "pair":
            if a.notched:
                return _shear_at(ideal, lam, a.p, a.p + n)
            return _shear_at(ideal, lam.dual(), a.p, a.p + n)
        return _shear_at(ideal, lam, a.p, INF)
    lo, hi = _chord_lift(a, t.surface)
    return _shear_at(ideal, lam, lo, hi)


def shear_coordinates(lam: Lamination, t: Triangulation) -> tuple[int, ...]:
    return tuple(shear_coordinate(lam, t, a) for a in t.arcs)


def geometric_c_vector(gamma: TaggedArc, t: Triangulation, lam0: Sequence[Lamination]) -> tuple[int, ...]:
    t.index(gamma)
    return tuple(shear_coordinate(lam, t, gamma) for lam in lam0)


def geometric_d_vector(gamma: TaggedArc, t0: Triangulation) -> tuple[int, ...]:
    return tuple(intersection_pairing(g, gamma, t0.surface) for g in t0.arcs)


def enumerate_triangulations(s: MarkedSurface, start: Triangulation | None = None) -> list[Triangulation]:
    """All triangulations, BFS over flips; each is listed once with the labels inherited along its path."""
    t0 = start or initial_triangulation(s)
    seen = {t0.key(): t0}
    queue = deque([t0])
    while queue:
        t = queue.popleft()
        for k in range(t.n):
            u = flip_at(t, k)
            if u.key() not in seen:
                seen[u.key()] = u
                queue.append(u)
    return list(seen.values())


@lru_cache(maxsize=None)
def _all_triangulations(s: MarkedSurface) -> tuple[Triangulation, ...]:
    return tuple(enumerate_triangulations(s))


def bipartite_quadrilateral_reduction(gamma: TaggedArc, t: Triangulation,
                                      lam0: Sequence[Lamination]) -> tuple[Triangulation, TaggedArc]:
    """A bipartite triangulation and one of its arcs carrying the same positive c-vector."""
    c = geometric_c_vector(gamma, t, lam0)
    if min(c) < 0 or not any(c):
        raise ValueError(f"c-vector {c} is not positive")
    if is_bipartite(b_matrix_of(t)):
        return t, gamma
    for u in _all_triangulations(t.surface):
        if not is_bipartite(b_matrix_of(u)):
            continue
        for a in u.arcs:
            if geometric_c_vector(a, u, lam0) == c:
                return u, a
    raise NotFound(f"no bipartite triangulation carries {c}")


@dataclass
class CrossCheck:
    triangulations: int = 0
    pairs: int = 0
    flips: int = 0
    mismatches: list = None

    def __post_init__(self):
        if self.mismatches is None:
            self.mismatches = []

    @property
    def ok(self) -> bool:
        return not self.mismatches


def cross_check(t0: Triangulation, check_flips: bool = True) -> CrossCheck:
    """Compare the surface computations from ``t0`` against the algebraic engine.

    Walks all triangulations by flips carrying a labeled seed, and compares
    the B-matrix, every C-column with the shear coordinates of the initial
    multilamination, and every D-column with the intersection pairings.
    """
    report = CrossCheck()
    lam0 = multilamination(t0)
    b0 = b_matrix_of(t0)
    seen = {t0.key()}
    queue = deque([(t0, initial_seed(b0))])
    while queue:
        t, seed = queue.popleft()
        report.triangulations += 1
        bt = b_matrix_of(t)
        if bt != seed.b:
            report.mismatches.append(("B", t, bt.tolist(), seed.b.tolist()))
        for j, a in enumerate(t.arcs):
            report.pairs += 1
            c = geometric_c_vector(a, t, lam0)
            if c != tuple(int(x) for x in seed.c[:, j]):
                report.mismatches.append(("C", t, a, c, seed.c[:, j].tolist()))
            d = geometric_d_vector(a, t0)
            if d != tuple(int(x) for x in seed.d[:, j]):
                report.mismatches.append(("D", t, a, d, seed.d[:, j].tolist()))
        for k in range(t.n):
            u = flip_at(t, k)
            if check_flips:
                report.flips += 1
                if b_matrix_of(u) != mutate_b(bt, k):
                    report.mismatches.append(("flip", t, k))
            if u.key() not in seen:
                seen.add(u.key())
                queue.append((u, mutate_seed(seed, k)))
    return report


def flip_graph_dot(s: MarkedSurface) -> str:
    ts = enumerate_triangulations(s)
    index = {t.key(): i for i, t in enumerate(ts)}
    lines = ["graph flips {"]
    for i, t in enumerate(ts):
        lines.append(f'  {i} [label="{" ".join(map(str, sorted(t.arcs)))}"];')
    edges = set()
    for i, t in enumerate(ts):
        for k in range(t.n):
            j = index[flip_at(t, k).key()]
            edges.add((min(i, j), max(i, j)))
    lines += [f"  {i} -- {j};" for i, j in sorted(edges)]
    lines.append("}")
    return "\n".join(lines)


def triangulations_to_json(ts: Iterable[Triangulation]) -> str:
    return json.dumps([t.to_json() for t in ts], indent=1)
