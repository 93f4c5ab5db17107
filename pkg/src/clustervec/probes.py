"""Known vector families for two rank-3 infinite-type quivers, used to audit bounded-depth probes."""
from __future__ import annotations

from itertools import permutations
from math import gcd

from .matrices import ExchangeMatrix

# 2 -> 1, 3 -> 2 and a double arrow 1 => 3; mutation equivalent to affine A2
AFFINE_A2_CYCLIC = ExchangeMatrix([[0, -1, 2], [1, 0, -1], [-2, 1, 0]])
MARKOV = ExchangeMatrix([[0, 2, -2], [-2, 0, 2], [2, -2, 0]])


def in_affine_a2_family(v) -> bool:
    """Non-initial d-vectors (and positive c-vectors) of ``AFFINE_A2_CYCLIC``."""
    x, y, z = v
    if (x, y, z) in ((0, 1, 0), (1, 1, 1)):
        return True
    if y not in (0, 1) or min(x, z) < 0:
        return False
    return abs(x - z) == 1


def _markov_pairs(v):
    # (a+1, b+1, a+b+1) or (a-1, b-1, a+b-1) with 1 <= a <= b coprime
    x, y, z = sorted(v)
    for shift in (1, -1):
        a, b = x - shift, y - shift
        if 1 <= a <= b and gcd(a, b) == 1 and z == a + b + shift:
            return True
    return False


def in_markov_c_family(v) -> bool:
    """Positive c-vectors of ``MARKOV``: permutations of the coprime family or of (1, 2, 2)."""
    v = tuple(v)
    if sorted(v) == [1, 2, 2]:
        return True
    return any(_markov_pairs(p) for p in set(permutations(v)))


def in_markov_d_family(v) -> bool:
    x, y, z = sorted(v)
    a, b = x + 1, y + 1
    return 1 <= a <= b and gcd(a, b) == 1 and z == a + b - 1


KNOWN_FAMILIES = {
    AFFINE_A2_CYCLIC: ("affine A2 cycle", in_affine_a2_family, in_affine_a2_family),
    MARKOV: ("Markov", in_markov_c_family, in_markov_d_family),
}
