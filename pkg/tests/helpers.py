import random
from typing import Sequence

from app.lattice_core import Lattice, LatticeVector
from app.monodromy import reflect

# index of a_1 in E8 + U^2 (basis n1..n8, a1, a2, b1, b2)
A1, A2, B1, B2 = 8, 9, 10, 11


def random_root(L: Lattice, reflectors: Sequence[LatticeVector], rng: random.Random, length: int = 6) -> LatticeVector:
    """Image of a random reflector under a random word in the reflectors."""
    root = rng.choice(reflectors)
    for _ in range(rng.randint(0, length)):
        root = reflect(L, rng.choice(reflectors), root)
    return root
