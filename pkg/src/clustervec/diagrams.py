"""Dynkin diagrams, weighted diagrams, full-subdiagram embeddings and template catalogs.

A diagram is stored as its Cartan matrix; an edge {i, j} carries the label
``(-a_ji, -a_ij)``. In the Kac convention the endpoint ``i`` with
``|a_ij| > |a_ji|`` is the short root, so DOT output draws the arrow from the
long end towards the short end.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

from .canonical import canonical_key
from .dynkin_types import ClusterTypeLabel, parse_label, reference_matrix
from .enumeration import DEFAULT_CLASS_CAP, enumerate_matrix_class, vector_sets_of
from .errors import DisconnectedSupport
from .matrices import CartanMatrix, ExchangeMatrix, cartan_counterpart

CATALOG_SCHEMA = "clustervec.templates/1"
GENERATOR_VERSION = "1"
DATA_DIR = Path(__file__).with_name("data")

Vector = tuple[int, ...]


@dataclass(frozen=True)
class DynkinDiagram:
    cartan: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.cartan)

    @property
    def edges(self) -> dict[tuple[int, int], tuple[int, int]]:
        a = self.cartan
        return {(i, j): (-a[j][i], -a[i][j])
                for i in range(self.n) for j in range(i + 1, self.n) if a[i][j]}

    def neighbours(self, i: int) -> list[int]:
        return [j for j in range(self.n) if j != i and self.cartan[i][j]]

    def is_simply_laced(self) -> bool:
        return all(lab == (1, 1) for lab in self.edges.values())

    def is_connected(self, vertices: Iterable[int] | None = None) -> bool:
        verts = set(range(self.n) if vertices is None else vertices)
        if not verts:
            return False
        start = min(verts)
        seen = {start}
        stack = [start]
        while stack:
            i = stack.pop()
            for j in self.neighbours(i):
                if j in verts and j not in seen:
                    seen.add(j)
                    stack.append(j)
        return seen == verts

    def induced(self, vertices: Sequence[int]) -> "DynkinDiagram":
        a = self.cartan
        return DynkinDiagram(tuple(tuple(a[i][j] for j in vertices) for i in vertices))

    def key(self) -> tuple:
        return canonical_key(self.cartan)

    def triangle_count(self) -> int:
        return sum(1 for i in range(self.n) for j in range(i + 1, self.n)
                   for k in range(j + 1, self.n)
                   if self.cartan[i][j] and self.cartan[j][k] and self.cartan[i][k])

    def cyclomatic_number(self) -> int:
        comps = 0
        seen: set[int] = set()
        for v in range(self.n):
            if v in seen:
                continue
            comps += 1
            stack = [v]
            seen.add(v)
            while stack:
                i = stack.pop()
                for j in self.neighbours(i):
                    if j not in seen:
                        seen.add(j)
                        stack.append(j)
        return len(self.edges) - self.n + comps

    def to_json(self) -> dict:
        return {"vertices": self.n,
                "edges": [[i, j, lab[0], lab[1]] for (i, j), lab in sorted(self.edges.items())]}

    def to_dot(self, name: str = "X", labels: Sequence[str] | None = None) -> str:
        return _dot(self, name, labels)


def diagram_of(a: CartanMatrix) -> DynkinDiagram:
    return DynkinDiagram(tuple(tuple(int(x) for x in row) for row in a.a))


def diagram_of_matrix(m: ExchangeMatrix) -> DynkinDiagram:
    return diagram_of(cartan_counterpart(m))


def _dot(x: DynkinDiagram, name: str, labels) -> str:
    lines = [f"graph {name} {{"]
    for i in range(x.n):
        text = labels[i] if labels else str(i)
        lines.append(f'  {i} [label="{text}"];')
    for (i, j), (p, q) in sorted(x.edges.items()):
        # (p, q) = (|a_ji|, |a_ij|); the endpoint with the larger |a_.| entry is short
        mult = p * q
        if p == q:
            lines.append(f'  {i} -- {j} [label="{mult}"];')
        else:
            long_, short = (i, j) if q < p else (j, i)
            lines.append(f'  {long_} -- {short} [label="{mult} >", dir=forward];')
    lines.append("}")
    return "\n".join(lines)


@dataclass(frozen=True)
class WeightedDiagram:
    """Diagram with a positive weight per vertex; equality is isomorphism."""

    diagram: DynkinDiagram
    weights: tuple[int, ...]
    _key: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.weights) != self.diagram.n or any(w < 1 for w in self.weights):
            raise ValueError("weights must be positive, one per vertex")
        if not self.diagram.is_connected():
            raise DisconnectedSupport("weighted diagram must be connected")
        object.__setattr__(self, "_key", canonical_key(self.weighted_matrix()))

    def weighted_matrix(self) -> list[list[int]]:
        a = [list(row) for row in self.diagram.cartan]
        for i, w in enumerate(self.weights):
            a[i][i] = w
        return a

    @property
    def n(self) -> int:
        return self.diagram.n

    def __eq__(self, other):
        if not isinstance(other, WeightedDiagram):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def sort_key(self):
        return (self.n, sum(self.weights), self._key)

    def features(self) -> dict:
        d = self.diagram
        return {
            "size": self.n,
            "height": sum(self.weights),
            "max_weight": max(self.weights),
            "weight_2_vertices": sum(1 for w in self.weights if w == 2),
            "simply_laced": d.is_simply_laced(),
            "tree": d.cyclomatic_number() == 0,
            "branch_vertices": sum(1 for i in range(d.n) if len(d.neighbours(i)) >= 3),
            "degrees": sorted((len(d.neighbours(i)) for i in range(d.n)), reverse=True),
        }

    def to_json(self) -> dict:
        out = self.diagram.to_json()
        out["weights"] = list(self.weights)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "WeightedDiagram":
        n = obj["vertices"]
        a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for i, j, p, q in obj["edges"]:
            a[j][i] = -p
            a[i][j] = -q
        return cls(DynkinDiagram(tuple(map(tuple, a))), tuple(obj["weights"]))

    def to_dot(self, name: str = "W") -> str:
        return _dot(self.diagram, name, [str(w) for w in self.weights])


def string_diagram(weights: Sequence[int]) -> WeightedDiagram:
    k = len(weights)
    a = [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(k)] for i in range(k)]
    return WeightedDiagram(DynkinDiagram(tuple(map(tuple, a))), tuple(weights))


def vector_to_weighted_diagram(v: Sequence[int], x: DynkinDiagram) -> WeightedDiagram:
    if len(v) != x.n:
        raise ValueError("vector length does not match the diagram")
    if any(c < 0 for c in v) or not any(v):
        raise ValueError("expected a nonzero nonnegative vector")
    support = [i for i, c in enumerate(v) if c]
    if not x.is_connected(support):
        raise DisconnectedSupport(f"support {support} is disconnected")
    return WeightedDiagram(x.induced(support), tuple(int(v[i]) for i in support))


@dataclass(frozen=True)
class Embedding:
    template: WeightedDiagram
    target: DynkinDiagram
    vertex_map: tuple[int, ...]

    def vector(self) -> Vector:
        v = [0] * self.target.n
        for i, t in enumerate(self.vertex_map):
            v[t] = self.template.weights[i]
        return tuple(v)


def _embeddings_raw(w: WeightedDiagram, x: DynkinDiagram):
    a, b = w.diagram.cartan, x.cartan
    k, n = w.n, x.n
    if k > n:
        return
    # order template vertices so each (after the first) touches an earlier one
    order = [0]
    while len(order) < k:
        for v in range(k):
            if v not in order and any(a[v][u] for u in order):
                order.append(v)
                break
    image = [-1] * k
    used = [False] * n

    def extend(pos):
        if pos == k:
            yield tuple(image)
            return
        v = order[pos]
        for t in range(n):
            if used[t]:
                continue
            if all(a[v][u] == b[t][image[u]] and a[u][v] == b[image[u]][t] for u in order[:pos]):
                image[v] = t
                used[t] = True
                yield from extend(pos + 1)
                used[t] = False
        image[v] = -1

    yield from extend(0)


def enumerate_embeddings(w: WeightedDiagram, x: DynkinDiagram) -> list[Embedding]:
    """Full-subdiagram embeddings of ``w`` into ``x`` up to automorphisms of ``w``.

    Two maps differ by a template automorphism exactly when they place the
    same weights on the same target vertices, so the induced vector is the
    dedup key. Sorted by vector.
    """
    found: dict[Vector, Embedding] = {}
    for m in _embeddings_raw(w, x):
        e = Embedding(w, x, m)
        found.setdefault(e.vector(), e)
    return [found[v] for v in sorted(found)]


def templates_A(n: int) -> list[WeightedDiagram]:
    if n < 1:
        raise ValueError("n must be >= 1")
    return [string_diagram([1] * k) for k in range(1, n + 1)]


def templates_of_matrix(m: ExchangeMatrix) -> set[WeightedDiagram]:
    """Weighted diagrams of all positive c-vectors of ``m`` on its own X(m)."""
    x = diagram_of_matrix(m)
    return {vector_to_weighted_diagram(c, x) for c in vector_sets_of(m).c_pos}


def extract_templates(z: ClusterTypeLabel, cap: int = DEFAULT_CLASS_CAP,
                      max_members: int | None = None) -> list[WeightedDiagram]:
    """Generate W(z) from the c-vectors of the mutation class of a reference matrix.

    ``max_members`` limits how many class members (in BFS order) contribute;
    None uses the whole class. Type A returns the strings directly.
    """
    if z.family == "A":
        return templates_A(z.rank)
    members = enumerate_matrix_class(reference_matrix(z), cap).members
    if max_members is not None:
        members = members[:max_members]
    out: set[WeightedDiagram] = set()
    for m in members:
        out |= templates_of_matrix(m)
    return sorted(out, key=WeightedDiagram.sort_key)


def compute_V(b: ExchangeMatrix, templates: Iterable[WeightedDiagram]) -> set[Vector]:
    x = diagram_of_matrix(b)
    out: set[Vector] = set()
    for w in templates:
        out.update(e.vector() for e in enumerate_embeddings(w, x))
    return out


def check_membership_X_An(x: DynkinDiagram) -> bool:
    if x.n < 1 or not x.is_connected() or not x.is_simply_laced():
        return False
    # all cycles are triangles iff triangles are edge-disjoint and span the cycle space
    n = x.n
    for i in range(n):
        for j in range(i + 1, n):
            if x.cartan[i][j]:
                common = [k for k in x.neighbours(i) if k != j and x.cartan[j][k]]
                if len(common) > 1:
                    return False
    if x.triangle_count() != x.cyclomatic_number():
        return False
    for v in range(n):
        nb = x.neighbours(v)
        adjacent = [(p, q) for idx, p in enumerate(nb) for q in nb[idx + 1:] if x.cartan[p][q]]
        if len(nb) > 4:
            return False
        if len(nb) == 3 and len(adjacent) != 1:
            return False
        if len(nb) == 4:
            if len(adjacent) != 2 or len({u for pair in adjacent for u in pair}) != 4:
                return False
    return True


@lru_cache(maxsize=None)
def _class_diagram_keys(z: ClusterTypeLabel, cap: int) -> frozenset:
    members = enumerate_matrix_class(reference_matrix(z), cap).members
    return frozenset(diagram_of_matrix(m).key() for m in members)


def check_membership_X(z: ClusterTypeLabel, x: DynkinDiagram, cap: int = DEFAULT_CLASS_CAP) -> bool:
    if x.n != z.rank:
        return False
    if z.family == "A":
        return check_membership_X_An(x)
    return x.key() in _class_diagram_keys(z.normalized(), cap)


# --- catalogs ----------------------------------------------------------------

def catalog_to_json(z: ClusterTypeLabel, templates: Sequence[WeightedDiagram],
                    members_used: int | None = None, class_size: int | None = None) -> dict:
    complete = members_used is None or class_size is None or members_used >= class_size
    return {
        "schema": CATALOG_SCHEMA,
        "type": str(z),
        "generator": GENERATOR_VERSION,
        "complete": complete,
        "members_used": members_used,
        "class_size": class_size,
        "count": len(templates),
        "templates": [dict(w.to_json(), features=w.features()) for w in templates],
    }


def catalog_from_json(obj: dict) -> tuple[ClusterTypeLabel, list[WeightedDiagram]]:
    if obj.get("schema") != CATALOG_SCHEMA:
        raise ValueError(f"unsupported catalog schema {obj.get('schema')!r}")
    return parse_label(obj["type"]), [WeightedDiagram.from_json(t) for t in obj["templates"]]


def catalog_path(z: ClusterTypeLabel, directory: Path | None = None) -> Path:
    return (directory or DATA_DIR) / f"templates_{z}.json"


def write_catalog(z: ClusterTypeLabel, templates: Sequence[WeightedDiagram],
                  directory: Path | None = None, members_used: int | None = None,
                  class_size: int | None = None) -> Path:
    path = catalog_path(z, directory)
    path.parent.mkdir(parents=True, exist_ok=True)
    obj = catalog_to_json(z, templates, members_used, class_size)
    path.write_text(json.dumps(obj, indent=1) + "\n")
    _read_catalog.cache_clear()
    return path


@lru_cache(maxsize=None)
def _read_catalog(z: ClusterTypeLabel, directory: str | None) -> tuple[tuple[WeightedDiagram, ...], bool] | None:
    # the shipped catalog wins over a user cache
    for d in (DATA_DIR, Path(directory) if directory else None):
        if d is None:
            continue
        path = catalog_path(z, d)
        if path.exists():
            obj = json.loads(path.read_text())
            _, temps = catalog_from_json(obj)
            return tuple(temps), bool(obj.get("complete", True))
    return None


# classes too large to extract from every member on demand
SAMPLED_EXTRACTION = {ClusterTypeLabel("E", 8): 24}


def catalog_is_complete(z: ClusterTypeLabel, directory: Path | None = None) -> bool:
    if z.family == "A":
        return True
    found = _read_catalog(z.normalized(), str(directory) if directory else None)
    if found is None:
        return z.normalized() not in SAMPLED_EXTRACTION
    return found[1]


def templates_for(z: ClusterTypeLabel, cap: int = DEFAULT_CLASS_CAP,
                  directory: Path | None = None, generate: bool = True) -> list[WeightedDiagram]:
    """Shipped or cached catalog for ``z``; generated on demand when missing."""
    if z.family == "A":
        return templates_A(z.rank)
    z = z.normalized()
    found = _read_catalog(z, str(directory) if directory else None)
    if found is not None:
        return list(found[0])
    if not generate:
        raise FileNotFoundError(f"no template catalog for {z}")
    limit = SAMPLED_EXTRACTION.get(z)
    temps = extract_templates(z, cap, limit)
    if directory is not None:
        size = len(enumerate_matrix_class(reference_matrix(z), cap)) if limit else None
        write_catalog(z, temps, directory, limit, size)
    return temps
