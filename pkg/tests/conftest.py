import random
from typing import List

import pytest

from app.builders import e8, e8_simple_roots_in, embed, witness_ambient, witness_six
from app.lattice_core import Lattice, LatticeVector

from tests.helpers import A1, A2, B2


@pytest.fixture
def e8_lattice() -> Lattice:
    return e8()


@pytest.fixture
def witness():
    return witness_six()


@pytest.fixture
def marked_rank12():
    """E8 + U^2 with f = a_1, and roots orthogonal to f that generate its reflections."""
    L = witness_ambient()
    n = L.rank
    f = embed((1,), A1, n)
    reflectors: List[LatticeVector] = list(e8_simple_roots_in(n))
    a2_minus_b2 = [0] * n
    a2_minus_b2[A2], a2_minus_b2[B2] = 1, -1
    n1_plus_a1 = [0] * n
    n1_plus_a1[0], n1_plus_a1[A1] = 1, 1
    reflectors += [tuple(a2_minus_b2), tuple(n1_plus_a1)]
    return L, f, reflectors


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)
