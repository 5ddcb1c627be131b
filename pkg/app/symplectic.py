"""Skew forms on first homology, transvections and generation evidence mod p."""
import logging
from collections import deque
from dataclasses import dataclass
from typing import FrozenSet, List, Sequence, Tuple

from sympy import Matrix, isprime

from app.errors import DimensionMismatch, LatticeError, NonPositiveQ, NotSymplectic, ZeroVector
from app.isometry_spinor import in_O_prime_f
from app.lattice_core import IntMatrix, Lattice, LatticeVector, mat_mul, transpose

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SymplecticSpace:
    """Basis a_1..a_q, b_1..b_q; ``skew`` is the Gram matrix of b."""
    skew: IntMatrix

    @property
    def rank(self) -> int:
        return len(self.skew)

    @property
    def q(self) -> int:
        return self.rank // 2


def new_symplectic_space(skew: Sequence[Sequence[int]]) -> SymplecticSpace:
    rows = tuple(tuple(int(v) for v in row) for row in skew)
    n = len(rows)
    if n == 0 or n % 2 or any(len(r) != n for r in rows):
        raise DimensionMismatch("Skew form must be square of even size")
    if any(rows[i][j] != -rows[j][i] for i in range(n) for j in range(n)):
        raise LatticeError("Form is not antisymmetric")
    if abs(int(Matrix(rows).det(method="bareiss"))) != 1:
        raise LatticeError("Skew form is not unimodular")
    return SymplecticSpace(skew=rows)


def standard_symplectic(q: int) -> SymplecticSpace:
    if q < 1:
        raise NonPositiveQ(f"q must be positive, got {q}")
    n = 2 * q
    skew = [[0] * n for _ in range(n)]
    for i in range(q):
        skew[i][q + i] = 1
        skew[q + i][i] = -1
    return new_symplectic_space(skew)


def pairing(S: SymplecticSpace, x: Sequence[int], y: Sequence[int]) -> int:
    return sum(x[i] * sum(s * yj for s, yj in zip(S.skew[i], y)) for i in range(S.rank))


def transvection(S: SymplecticSpace, v: Sequence[int]) -> IntMatrix:
    """T_v(x) = x + b(x, v) v, as a matrix acting on coordinate columns."""
    if len(v) != S.rank:
        raise DimensionMismatch(f"Vector of length {len(v)} in a space of rank {S.rank}")
    if not any(v):
        raise ZeroVector("Transvection needs a nonzero vector")
    # b(x, v) = x^T J v, so T = I + v (J v)^T
    jv = [sum(s * vj for s, vj in zip(row, v)) for row in S.skew]
    n = S.rank
    return tuple(
        tuple((1 if i == j else 0) + v[i] * jv[j] for j in range(n))
        for i in range(n)
    )


def is_symplectic(S: SymplecticSpace, N: Sequence[Sequence[int]]) -> bool:
    if len(N) != S.rank or any(len(row) != S.rank for row in N):
        raise DimensionMismatch(f"Matrix is not {S.rank}x{S.rank}")
    return mat_mul(transpose(N), mat_mul(S.skew, N)) == S.skew


def standard_generators(S: SymplecticSpace, with_sums: bool = True) -> List[IntMatrix]:
    """Transvections in a_i and b_i, plus a_i + a_{i+1} when ``with_sums``.

    The basis transvections alone only generate SL2 x ... x SL2.
    """
    n, q = S.rank, S.q

    def unit(*indices: int) -> LatticeVector:
        return tuple(1 if k in indices else 0 for k in range(n))

    vectors = [unit(i) for i in range(q)] + [unit(q + i) for i in range(q)]
    if with_sums:
        vectors += [unit(i, i + 1) for i in range(q - 1)]
    return [transvection(S, v) for v in vectors]


def sp_order(q: int, p: int) -> int:
    """|Sp(2q, F_p)| = p^(q^2) · prod_{i=1..q} (p^(2i) - 1)."""
    order = p ** (q * q)
    for i in range(1, q + 1):
        order *= p ** (2 * i) - 1
    return order


def _reduce(M: Sequence[Sequence[int]], p: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(v % p for v in row) for row in M)


def _mul_mod(A, B, p: int) -> Tuple[Tuple[int, ...], ...]:
    cols = list(zip(*B))
    return tuple(
        tuple(sum(a * b for a, b in zip(row, col)) % p for col in cols)
        for row in A
    )


def group_mod_p(S: SymplecticSpace, generators: Sequence[Sequence[Sequence[int]]], p: int) -> FrozenSet:
    """Elements of the group generated by the reductions of ``generators`` mod p."""
    if not isprime(p):
        raise LatticeError(f"{p} is not prime")
    for g in generators:
        if not is_symplectic(S, g):
            raise NotSymplectic("Generator does not preserve the skew form")

    gens = [_reduce(g, p) for g in generators]
    identity = _reduce(tuple(tuple(1 if i == j else 0 for j in range(S.rank)) for i in range(S.rank)), p)
    seen = {identity}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for g in gens:
            nxt = _mul_mod(current, g, p)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)

    logger.info(f"Closure mod {p} of {len(gens)} generators on rank {S.rank}: order {len(seen)}")
    return frozenset(seen)


def closure_mod_p(S: SymplecticSpace, generators: Sequence[Sequence[Sequence[int]]], p: int) -> int:
    return len(group_mod_p(S, generators, p))


def in_product_group(
    L: Lattice,
    M: Sequence[Sequence[int]],
    f: Sequence[int],
    S: SymplecticSpace,
    N: Sequence[Sequence[int]],
) -> bool:
    """Membership of (M, N) in O'_f(L) x Sp(S)."""
    return in_O_prime_f(L, M, f) and is_symplectic(S, N)
