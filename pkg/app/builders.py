import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, List, Sequence, Tuple

from app.errors import BadExponent, EmptyInput, NegativeGenus, NonPositiveChi, NonPositiveQ
from app.lattice_core import (
    Lattice,
    LatticeVector,
    Signature,
    is_root,
    new_lattice,
)

logger = logging.getLogger(__name__)

# E8 in the Dynkin-node basis: n1..n7 a chain, n8 attached to n5
E8_EDGES = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7))

# alpha_1 = n1, beta = n2, alpha_2 = n4, alpha_3 = n6: orthogonal except inner(alpha_1, beta) = 1
WITNESS_E8_NODES = {"alpha1": 0, "beta": 1, "alpha2": 3, "alpha3": 5}


@dataclass(frozen=True)
class WitnessTuple:
    ambient: Lattice
    vectors: Tuple[LatticeVector, ...]


def diagonal_lattice(entries: Sequence[int], label: str = None) -> Lattice:
    if not entries:
        raise EmptyInput("diagonal_lattice needs at least one entry")
    n = len(entries)
    gram = [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]
    return new_lattice(gram, label=label or "diag(" + ",".join(str(e) for e in entries) + ")")


def root_lattice(rank: int, edges: Sequence[Tuple[int, int]], label: str = None) -> Lattice:
    """Negative-definite convention: -2 on the diagonal, +1 on every Dynkin edge."""
    gram = [[-2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for i, j in edges:
        gram[i][j] = gram[j][i] = 1
    return new_lattice(gram, label=label)


def a2() -> Lattice:
    return root_lattice(2, [(0, 1)], label="A2")


def e8() -> Lattice:
    return root_lattice(8, E8_EDGES, label="E8")


def orthogonal_sum(A: Lattice, B: Lattice, label: str = None) -> Lattice:
    n, m = A.rank, B.rank
    gram = [list(row) + [0] * m for row in A.gram] + [[0] * n + list(row) for row in B.gram]
    if label is None and A.label and B.label:
        label = f"{A.label}+{B.label}"
    return new_lattice(gram, label=label)


def embed(x: Sequence[int], offset: int, total: int) -> LatticeVector:
    """Place a vector of a summand into an orthogonal sum of rank ``total``."""
    out = [0] * total
    out[offset:offset + len(x)] = x
    return tuple(out)


def torus_block(q: int) -> Lattice:
    if q < 1:
        raise NonPositiveQ(f"q must be positive, got {q}")
    n = 2 * q
    gram = [[0] * n for _ in range(n)]
    for i in range(q):
        gram[i][q + i] = gram[q + i][i] = 1
    return new_lattice(gram, label=f"U^{q}")


def torus_relabeled() -> Dict[str, LatticeVector]:
    """The q = 2 torus classes t1+, t2-, t1-, t2+ in the basis (a1, a2, b1, b2).

    Only inner(t1+, t2-) = 1 and inner(t1-, t2+) = -1 are nonzero.
    """
    return {
        "t1+": (1, 0, 0, 0),
        "t2-": (0, 0, 1, 0),
        "t1-": (0, -1, 0, 0),
        "t2+": (0, 0, 0, 1),
    }


def annulus_pair(g: int) -> Tuple[Lattice, LatticeVector, LatticeVector]:
    """The lattice (-2) + (0)^(2g+1) with the two spheres s+ and s-.

    Both are roots, inner(s+, s-) = 2 and s+ + s- is isotropic.
    """
    if g < 0:
        raise NegativeGenus(f"g must be nonnegative, got {g}")
    n = 2 * g + 2
    L = diagonal_lattice([-2] + [0] * (n - 1), label=f"annulus(g={g})")
    s_plus = embed((1,), 0, n)
    s_minus = embed((-1, 1), 0, n)
    return L, s_plus, s_minus


def is_fibre_pair(L: Lattice, d1: Sequence[int], d2: Sequence[int], f: Sequence[int]) -> bool:
    return (
        is_root(L, d1)
        and is_root(L, d2)
        and tuple(a + b for a, b in zip(d1, d2)) == tuple(f)
    )


# ======================================================
# Milnor lattice of J_{2 chi}
# ======================================================

def seifert_one_variable(a: int) -> List[List[int]]:
    """Seifert matrix of t^a: (a-1)x(a-1), 1 on the diagonal, -1 just below."""
    n = a - 1
    return [[1 if i == j else (-1 if i == j + 1 else 0) for j in range(n)] for i in range(n)]


def _kron(A: List[List[int]], B: List[List[int]]) -> List[List[int]]:
    return [
        [a * b for a in row_a for b in row_b]
        for row_a in A
        for row_b in B
    ]


def brieskorn_lattice(exponents: Sequence[int], label: str = None) -> Lattice:
    """Tensor product of one-variable Seifert matrices, symmetrized and negated so
    every basis vector has square -2."""
    for e in exponents:
        if e < 2:
            raise BadExponent(f"exponents must be at least 2, got {e}")
    V = [[1]]
    for e in exponents:
        V = _kron(V, seifert_one_variable(e))
    n = len(V)
    gram = [[-(V[i][j] + V[j][i]) for j in range(n)] for i in range(n)]
    return new_lattice(gram, label=label)


def milnor_J(chi: int) -> Lattice:
    if chi < 1:
        raise NonPositiveChi(f"chi must be positive, got {chi}")
    L = brieskorn_lattice((2, 3, 6 * chi), label=f"J_{2 * chi}")
    logger.debug(f"Built Milnor lattice {L.label} of rank {L.rank}")
    return L


def bp_signature(a: int, b: int, c: int) -> Signature:
    """Signature predicted by the exponents: s = i/a + j/b + k/c taken mod 2."""
    for e in (a, b, c):
        if e < 2:
            raise BadExponent(f"exponents must be at least 2, got {e}")
    positive = zero = negative = 0
    for i, j, k in product(range(1, a), range(1, b), range(1, c)):
        s = (Fraction(i, a) + Fraction(j, b) + Fraction(k, c)) % 2
        if s.denominator == 1:
            zero += 1
        elif s < 1:
            positive += 1
        else:
            negative += 1
    return Signature(positive=positive, zero=zero, negative=negative)


# ======================================================
# Six-element witness
# ======================================================

def witness_ambient() -> Lattice:
    return orthogonal_sum(e8(), torus_block(2), label="E8+U^2")


def e8_simple_roots_in(total: int) -> List[LatticeVector]:
    return [embed(tuple(1 if j == i else 0 for j in range(8)), 0, total) for i in range(8)]


def witness_six() -> WitnessTuple:
    """(alpha2 + t1+, alpha1 + t2-, alpha1, beta, alpha1 + t1-, alpha3 - t2+) in E8 + U^2."""
    L = witness_ambient()
    n = L.rank

    def node(name: str) -> LatticeVector:
        return embed((1,), WITNESS_E8_NODES[name], n)

    t = {k: embed(v, 8, n) for k, v in torus_relabeled().items()}

    def add(x, y, sign=1):
        return tuple(u + sign * v for u, v in zip(x, y))

    vectors = (
        add(node("alpha2"), t["t1+"]),
        add(node("alpha1"), t["t2-"]),
        node("alpha1"),
        node("beta"),
        add(node("alpha1"), t["t1-"]),
        add(node("alpha3"), t["t2+"], sign=-1),
    )
    return WitnessTuple(ambient=L, vectors=vectors)
