"""Root membership and real/imaginary classification for symmetrizable Cartan matrices."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .diagrams import DynkinDiagram, diagram_of
from .dynkin_types import positive_root_count  # noqa: F401  (re-exported)
from .errors import DisconnectedSupport, NotSignCoherent, NotSkewSymmetric
from .folding import fold_cartan
from .matrices import CartanMatrix, ExchangeMatrix, cartan_counterpart

HEIGHT_CAP = 10**4


class RootStatus(enum.Enum):
    REAL = "RealRoot"
    IMAGINARY = "ImaginaryRoot"
    NOT_A_ROOT = "NotARoot"

    def is_root(self) -> bool:
        return self is not RootStatus.NOT_A_ROOT


@dataclass(frozen=True)
class RootSystemContext:
    cartan: CartanMatrix

    @property
    def symmetrizer(self) -> tuple[int, ...]:
        return self.cartan.symmetrizer

    @property
    def n(self) -> int:
        return self.cartan.n

    def quadratic_form(self, v: Sequence[int]) -> int:
        """``v^T T A v``."""
        x = np.asarray(v, dtype=np.int64)
        t = np.asarray(self.symmetrizer, dtype=np.int64)
        return int(x @ (t[:, None] * self.cartan.a) @ x)

    def diagram(self) -> DynkinDiagram:
        return diagram_of(self.cartan)


def _support_connected(a: np.ndarray, v: np.ndarray) -> bool:
    supp = [i for i in range(len(v)) if v[i]]
    if not supp:
        return False
    seen = {supp[0]}
    stack = [supp[0]]
    while stack:
        i = stack.pop()
        for j in supp:
            if j not in seen and a[i, j]:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(supp)


def _walk(a: np.ndarray, v: np.ndarray, height_cap: int) -> RootStatus:
    v = v.copy()
    for _ in range(height_cap):
        if int(v.sum()) == 1:
            return RootStatus.REAL
        if not _support_connected(a, v):
            return RootStatus.NOT_A_ROOT
        av = a @ v
        up = [i for i in range(len(v)) if av[i] > 0]
        if not up:
            return RootStatus.IMAGINARY
        i = up[0]
        if int(v.sum()) == int(v[i]):
            # a multiple m*e_i with m > 1
            return RootStatus.NOT_A_ROOT
        v[i] -= av[i]
        if v[i] < 0:
            return RootStatus.NOT_A_ROOT
    return RootStatus.NOT_A_ROOT


def classify_root(ctx: RootSystemContext, v: Sequence[int], height_cap: int = HEIGHT_CAP) -> RootStatus:
    """Reflection walk towards the fundamental chamber.

    Each reflection strictly lowers the height, so the walk ends at a simple
    root (real), at a vector with ``(Av)_i <= 0`` everywhere on a connected
    support (imaginary), or by leaving the positive cone (not a root). The
    sign of ``v^T T A v`` is asserted against the verdict.
    """
    x = np.asarray(v, dtype=np.int64)
    if x.shape != (ctx.n,):
        raise ValueError(f"expected a vector of length {ctx.n}")
    if not x.any() or (x.min() < 0 < x.max()):
        raise NotSignCoherent(f"{tuple(int(c) for c in x)} is not sign-coherent")
    if x.min() < 0:
        x = -x
    status = _walk(ctx.cartan.a, x, height_cap)
    q = ctx.quadratic_form(x)
    if status is RootStatus.REAL and q <= 0:
        raise AssertionError(f"real root {tuple(x)} with non-positive norm {q}")
    if status is RootStatus.IMAGINARY and q > 0:
        raise AssertionError(f"imaginary root {tuple(x)} with positive norm {q}")
    return status


def support_is_tree(v: Sequence[int], x: DynkinDiagram) -> bool:
    support = [i for i, c in enumerate(v) if c]
    if not support or not x.is_connected(support):
        raise DisconnectedSupport(f"support {support} is disconnected")
    return x.induced(support).cyclomatic_number() == 0


def euler_form(b: ExchangeMatrix, c: Sequence[int], d: Sequence[int]) -> int:
    """``sum_i c_i d_i - sum_{b_ij > 0} b_ij c_j d_i``."""
    if not b.is_skew_symmetric():
        raise NotSkewSymmetric("the Euler form needs a skew-symmetric matrix")
    cv = np.asarray(c, dtype=np.int64)
    dv = np.asarray(d, dtype=np.int64)
    arrows = np.maximum(b.b, 0)
    return int(cv @ dv - dv @ arrows @ cv)


def fold_vector(v: Sequence[int], orbits: Sequence[Sequence[int]]) -> tuple[int, ...]:
    return tuple(int(sum(v[i] for i in orb)) for orb in orbits)


def check_folding_of_roots(ctx_unfolded: RootSystemContext, sigma, v: Sequence[int]) -> bool:
    """Fold a root of the unfolded system over the orbits of ``sigma`` and test the image."""
    if not classify_root(ctx_unfolded, v).is_root():
        raise ValueError(f"{tuple(v)} is not a root of the unfolded system")
    folded = RootSystemContext(fold_cartan(ctx_unfolded.cartan, sigma))
    return classify_root(folded, fold_vector(v, sigma.orbits)).is_root()


def context_of(m: ExchangeMatrix) -> RootSystemContext:
    return RootSystemContext(cartan_counterpart(m))
