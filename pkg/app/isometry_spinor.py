import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix

from app.builders import diagonal_lattice, orthogonal_sum, torus_block
from app.errors import DegenerateForm, DimensionMismatch, NotAnIsometry
from app.lattice_core import (
    IntMatrix,
    Lattice,
    LatticeVector,
    RadicalQuotient,
    check_square,
    gram_image,
    identity_matrix,
    mat_vec,
    preserves_form,
    quotient_by_radical,
    radical,
)

logger = logging.getLogger(__name__)

RationalVector = Tuple[Fraction, ...]


@dataclass(frozen=True)
class Isometry:
    matrix: IntMatrix


@dataclass(frozen=True)
class ReflectionFactorization:
    """Reflections r_1, ..., r_k with r_1 · r_2 · ... · r_k equal to the isometry."""
    vectors: Tuple[RationalVector, ...]
    sign_count: int

    @property
    def spinor_norm(self) -> int:
        return -1 if self.sign_count % 2 else 1


def new_isometry(L: Lattice, M: Sequence[Sequence[int]]) -> Isometry:
    matrix = tuple(tuple(int(v) for v in row) for row in M)
    if not preserves_form(L, matrix):
        raise NotAnIsometry("Matrix does not preserve the Gram form")
    return Isometry(matrix=matrix)


def is_isometry_fixing(L: Lattice, M: Sequence[Sequence[int]], f: Sequence[int]) -> bool:
    check_square(L, M)
    if len(f) != L.rank:
        raise DimensionMismatch(f"Vector of length {len(f)} in a lattice of rank {L.rank}")
    return preserves_form(L, M) and mat_vec(M, f) == tuple(f)


# ======================================================
# Rational form helpers
# ======================================================

def _bilinear(L: Lattice, x: Sequence, y: Sequence):
    return sum(x[i] * sum(g * yj for g, yj in zip(L.gram[i], y)) for i in range(L.rank))


def _orthogonal_basis(L: Lattice, rng: Optional[random.Random]) -> List[List[Fraction]]:
    """Anisotropic, pairwise orthogonal Q-basis of a nondegenerate lattice."""
    n = L.rank
    pending = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    if rng is not None:
        rng.shuffle(pending)

    basis = []
    while pending:
        idx = next((i for i, v in enumerate(pending) if _bilinear(L, v, v) != 0), None)
        if idx is None:
            pair = next(
                (
                    (i, j)
                    for i in range(len(pending))
                    for j in range(i + 1, len(pending))
                    if _bilinear(L, pending[i], pending[j]) != 0
                ),
                None,
            )
            if pair is None:
                raise DegenerateForm("Form is degenerate")
            i, j = pair
            pending[i] = [a + b for a, b in zip(pending[i], pending[j])]
            idx = i

        w = pending.pop(idx)
        if rng is not None:
            scale = Fraction(rng.randint(1, 7), rng.randint(1, 7)) * rng.choice((1, -1))
            w = [scale * a for a in w]
        qw = _bilinear(L, w, w)
        pending = [
            [a - (_bilinear(L, v, w) / qw) * b for a, b in zip(v, w)]
            for v in pending
        ]
        basis.append(w)
    return basis


@lru_cache(maxsize=64)
def _default_basis(L: Lattice) -> Tuple[RationalVector, ...]:
    return tuple(tuple(w) for w in _orthogonal_basis(L, None))


@lru_cache(maxsize=64)
def _radical_basis(L: Lattice) -> Tuple[LatticeVector, ...]:
    return tuple(radical(L))


@lru_cache(maxsize=64)
def _quotient(L: Lattice) -> RadicalQuotient:
    return quotient_by_radical(L)


def _check_nondegenerate(L: Lattice) -> None:
    if _radical_basis(L):
        raise DegenerateForm("Form is degenerate")


@lru_cache(maxsize=64)
def _positive_frame(L: Lattice) -> Tuple[Tuple[LatticeVector, LatticeVector], ...]:
    """Integral orthogonal vectors spanning a maximal positive definite subspace,
    each paired with its Gram image."""
    frame = []
    for w in _default_basis(L):
        if _bilinear(L, w, w) > 0:
            scale = lcm(*(c.denominator for c in w))
            v = tuple(int(c * scale) for c in w)
            frame.append((v, gram_image(L, v)))
    return tuple(frame)


def _reflect_left(L: Lattice, u: Sequence[Fraction], tau: List[List[Fraction]]) -> None:
    """tau <- r_u · tau, r_u(x) = x - 2 B(x, u) / B(u, u) · u."""
    n = L.rank
    qu = _bilinear(L, u, u)
    gu = [sum(g * ui for g, ui in zip(L.gram[i], u)) for i in range(n)]
    h = [sum(gu[i] * tau[i][j] for i in range(n)) for j in range(n)]
    for i in range(n):
        if u[i]:
            c = 2 * u[i] / qu
            for j in range(n):
                tau[i][j] -= c * h[j]


def reflection_product(L: Lattice, vectors: Sequence[Sequence[Fraction]]) -> Tuple[Tuple[Fraction, ...], ...]:
    """The matrix r_1 · r_2 · ... · r_k."""
    n = L.rank
    result = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for u in reversed(vectors):
        _reflect_left(L, u, result)
    return tuple(tuple(row) for row in result)


def cartan_dieudonne(
    L: Lattice,
    M,
    rng: Optional[random.Random] = None,
) -> ReflectionFactorization:
    """Factor M into at most 2·rank reflections in anisotropic rational vectors.

    Works through an orthogonal basis w_1..w_n, fixing one w_i per step. When the
    vector to be matched differs from w_i by an isotropic vector, the step uses the
    two reflections in tau(w_i) + w_i and w_i instead of one. Passing ``rng``
    permutes and rescales the basis, giving a different factorization.
    """
    matrix = M.matrix if isinstance(M, Isometry) else M
    check_square(L, matrix)
    _check_nondegenerate(L)
    if not isinstance(M, Isometry):
        new_isometry(L, matrix)

    n = L.rank
    tau = [[Fraction(v) for v in row] for row in matrix]
    vectors: List[RationalVector] = []

    basis = _default_basis(L) if rng is None else _orthogonal_basis(L, rng)
    for w in basis:
        v = list(w)
        image = [sum(tau[i][j] * v[j] for j in range(n)) for i in range(n)]
        if image == v:
            continue
        u = [a - b for a, b in zip(image, v)]
        if _bilinear(L, u, u) != 0:
            steps = [u]
        else:
            steps = [[a + b for a, b in zip(image, v)], v]
        for s in steps:
            _reflect_left(L, s, tau)
            vectors.append(tuple(s))

    if tau != [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]:
        raise RuntimeError("Cartan-Dieudonne reduction did not reach the identity")

    sign_count = sum(1 for u in vectors if _bilinear(L, u, u) > 0)
    logger.debug(f"Factored isometry into {len(vectors)} reflections, {sign_count} positive")
    return ReflectionFactorization(vectors=tuple(vectors), sign_count=sign_count)


def real_spinor_norm(L: Lattice, M) -> int:
    """+1 when M keeps the orientation of maximal positive definite subspaces.

    A reflection in a vector of positive square reverses that orientation and one in
    a vector of negative square keeps it, so the sign equals the parity of
    positive-square vectors in any factorization from :func:`cartan_dieudonne`.
    It is read off as the sign of det(B(M w_i, w_j)) over an orthogonal positive frame.
    """
    matrix = M.matrix if isinstance(M, Isometry) else M
    check_square(L, matrix)
    _check_nondegenerate(L)
    if not isinstance(M, Isometry):
        new_isometry(L, matrix)

    frame = _positive_frame(L)
    if not frame:
        return 1
    images = [mat_vec(matrix, w) for w, _ in frame]
    block = [[sum(a * b for a, b in zip(image, g)) for _, g in frame] for image in images]
    det = Matrix(block).det(method="bareiss")
    if det == 0:
        raise RuntimeError("Isometry collapsed a positive definite subspace")
    return 1 if det > 0 else -1


# ======================================================
# O'_f membership
# ======================================================

def induced_on_quotient(L: Lattice, M: Sequence[Sequence[int]]) -> Tuple[RadicalQuotient, IntMatrix]:
    """The action of an isometry of L on L modulo its radical."""
    quotient = _quotient(L)
    columns = [quotient.project(mat_vec(M, c)) for c in quotient.complement]
    k = len(quotient.complement)
    induced = tuple(tuple(columns[j][i] for j in range(k)) for i in range(k))
    return quotient, induced


@dataclass(frozen=True)
class OPrimeReport:
    preserves_form: bool
    fixes_f: bool
    spinor_norm: Optional[int]
    radical_rank: int

    @property
    def member(self) -> bool:
        return self.preserves_form and self.fixes_f and self.spinor_norm == 1


def o_prime_f_report(L: Lattice, M: Sequence[Sequence[int]], f: Sequence[int]) -> OPrimeReport:
    check_square(L, M)
    if len(f) != L.rank:
        raise DimensionMismatch(f"Vector of length {len(f)} in a lattice of rank {L.rank}")
    keeps = preserves_form(L, M)
    fixes = mat_vec(M, f) == tuple(f)
    if not keeps:
        return OPrimeReport(preserves_form=False, fixes_f=fixes, spinor_norm=None, radical_rank=0)

    rad = _radical_basis(L)
    if not rad:
        norm = real_spinor_norm(L, Isometry(matrix=tuple(tuple(r) for r in M)))
    else:
        quotient, induced = induced_on_quotient(L, M)
        if quotient.complement:
            norm = real_spinor_norm(quotient.lattice, Isometry(matrix=induced))
        else:
            norm = 1
    return OPrimeReport(preserves_form=True, fixes_f=fixes, spinor_norm=norm, radical_rank=len(rad))


def in_O_prime_f(L: Lattice, M: Sequence[Sequence[int]], f: Sequence[int]) -> bool:
    """gamma(f) = f and gamma has positive real spinor norm.

    The main generation statement is phrased with the canonical class k instead of
    f; only the f form is implemented.
    """
    return o_prime_f_report(L, M, f).member


def index_two_example() -> Tuple[Lattice, IntMatrix, int]:
    """U + (-2) with -identity, whose spinor norm is -1."""
    L = orthogonal_sum(torus_block(1), diagonal_lattice([-2]), label="U+(-2)")
    minus_identity = tuple(tuple(-v for v in row) for row in identity_matrix(L.rank))
    return L, minus_identity, real_spinor_norm(L, minus_identity)
