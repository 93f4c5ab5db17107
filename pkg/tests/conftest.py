import numpy as np
import pytest
from hypothesis import settings

from clustervec.dynkin_types import labels_of_rank, reference_matrix
from clustervec.enumeration import enumerate_matrix_class
from clustervec.matrices import ExchangeMatrix

settings.register_profile("ci", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("ci")

CYCLIC_A3 = ExchangeMatrix([[0, 1, -1], [-1, 0, 1], [1, -1, 0]])
EXAMPLE_D5 = ExchangeMatrix([
    [0, 1, 0, 0, 0],
    [-1, 0, 1, -1, 0],
    [0, -1, 0, 1, -1],
    [0, 1, -1, 0, 1],
    [0, 0, 1, -1, 0],
])
SIX = {(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1)}


def finite_members(max_rank: int) -> list[ExchangeMatrix]:
    """Every mutation-class member of every finite type up to ``max_rank``."""
    out = []
    for n in range(1, max_rank + 1):
        for z in labels_of_rank(n):
            if z.family == "C" and n == 2:
                continue
            out.extend(enumerate_matrix_class(reference_matrix(z)).members)
    return out


@pytest.fixture(scope="session")
def small_finite():
    return finite_members(3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
