import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

from sympy import Matrix, ZZ
from sympy.core.intfunc import igcdex
from sympy.matrices.normalforms import smith_normal_form

from app.errors import DimensionMismatch, EmptyInput, NotSymmetric

logger = logging.getLogger(__name__)

LatticeVector = Tuple[int, ...]
IntMatrix = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class Signature:
    positive: int
    zero: int
    negative: int

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.positive, self.zero, self.negative)

    def __add__(self, other: "Signature") -> "Signature":
        return Signature(
            self.positive + other.positive,
            self.zero + other.zero,
            self.negative + other.negative,
        )


@dataclass(frozen=True)
class Lattice:
    """Free module of finite rank with an integral symmetric bilinear form.

    Build instances through :func:`new_lattice`, which validates the Gram matrix.
    """
    gram: IntMatrix
    label: Optional[str] = None

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def basis_vector(self, i: int) -> LatticeVector:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def zero(self) -> LatticeVector:
        return (0,) * self.rank


def _as_int(value) -> int:
    as_int = int(value)
    if as_int != value:
        raise ValueError(f"Not an integer: {value!r}")
    return as_int


def new_lattice(gram: Sequence[Sequence[int]], label: Optional[str] = None) -> Lattice:
    rows = [tuple(_as_int(v) for v in row) for row in gram]
    if not rows:
        raise EmptyInput("Gram matrix is empty")

    n = len(rows)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise DimensionMismatch(f"Gram row {i} has {len(row)} entries, expected {n}")

    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise NotSymmetric(
                    f"gram[{i}][{j}]={rows[i][j]} differs from gram[{j}][{i}]={rows[j][i]}"
                )

    return Lattice(gram=tuple(rows), label=label)


def _check_vector(L: Lattice, x: Sequence[int]) -> None:
    if len(x) != L.rank:
        raise DimensionMismatch(f"Vector of length {len(x)} in a lattice of rank {L.rank}")


def gram_image(L: Lattice, x: Sequence[int]) -> LatticeVector:
    """The row vector x^T·G, so that inner(x, y) is a plain dot product with y."""
    _check_vector(L, x)
    return tuple(sum(g * xi for g, xi in zip(row, x)) for row in L.gram)


def inner(L: Lattice, x: Sequence[int], y: Sequence[int]) -> int:
    _check_vector(L, y)
    return sum(a * b for a, b in zip(gram_image(L, x), y))


def square(L: Lattice, x: Sequence[int]) -> int:
    return inner(L, x, x)


def is_root(L: Lattice, x: Sequence[int]) -> bool:
    return inner(L, x, x) == -2


def signature(L: Lattice) -> Signature:
    """Signature by symmetric Gaussian elimination over the rationals.

    Pivot rule: the first nonzero diagonal entry among the remaining indices; when the
    remaining diagonal vanishes, the first nonzero off-diagonal pair (i, j) is folded
    into a pivot by the congruence e_i -> e_i + e_j.
    """
    n = L.rank
    a = [[Fraction(v) for v in row] for row in L.gram]
    active = list(range(n))
    positive = negative = 0

    while active:
        pivot = next((i for i in active if a[i][i] != 0), None)
        if pivot is None:
            pair = next(
                ((i, j) for i in active for j in active if i < j and a[i][j] != 0),
                None,
            )
            if pair is None:
                break
            i, j = pair
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            pivot = i

        p = a[pivot][pivot]
        if p > 0:
            positive += 1
        else:
            negative += 1
        active.remove(pivot)

        for r in active:
            factor = a[r][pivot] / p
            if factor:
                for c in active:
                    a[r][c] -= factor * a[pivot][c]

    return Signature(positive=positive, zero=len(active), negative=negative)


def determinant(L: Lattice) -> int:
    return int(Matrix(L.gram).det(method="bareiss"))


def is_unimodular(L: Lattice) -> bool:
    return abs(determinant(L)) == 1


# ======================================================
# Matrices acting on coordinate columns
# ======================================================

def identity_matrix(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(A: Sequence[Sequence]) -> Tuple[tuple, ...]:
    return tuple(zip(*A))


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Tuple[tuple, ...]:
    cols = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A)


def mat_vec(A: Sequence[Sequence], x: Sequence) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, x)) for row in A)


def check_square(L: Lattice, M: Sequence[Sequence[int]]) -> None:
    if len(M) != L.rank or any(len(row) != L.rank for row in M):
        raise DimensionMismatch(f"Matrix is not {L.rank}x{L.rank}")


def preserves_form(L: Lattice, M: Sequence[Sequence[int]]) -> bool:
    """M^T · G · M == G."""
    check_square(L, M)
    return mat_mul(transpose(M), mat_mul(L.gram, M)) == L.gram


# ======================================================
# Integer row reduction
# ======================================================

@dataclass(frozen=True)
class Echelon:
    """Row echelon form H = U·A over the integers with U unimodular.

    ``rows`` holds the ``rank`` nonzero rows of H; ``transform`` is U and
    ``inverse`` is U^{-1} (both as row tuples).
    """
    rank: int
    rows: Tuple[LatticeVector, ...]
    transform: IntMatrix
    inverse: IntMatrix

    def kernel(self) -> List[LatticeVector]:
        """Z-basis of the left kernel {u : u·A = 0}."""
        return list(self.transform[self.rank:])


def _identity(n: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def echelon(rows: Sequence[Sequence[int]], ncols: int) -> Echelon:
    A = [list(r) for r in rows]
    m = len(A)
    U = _identity(m)
    Uinv = _identity(m)

    def combine(p: int, r: int, x: int, y: int, s: int, t: int) -> None:
        # rows (p, r) <- [[x, y], [s, t]] · rows (p, r), determinant 1
        for M in (A, U):
            rp, rr = M[p], M[r]
            M[p] = [x * u + y * v for u, v in zip(rp, rr)]
            M[r] = [s * u + t * v for u, v in zip(rp, rr)]
        # columns (p, r) of the inverse <- columns · [[t, -y], [-s, x]]
        for row in Uinv:
            cp, cr = row[p], row[r]
            row[p] = t * cp - s * cr
            row[r] = -y * cp + x * cr

    def swap(p: int, r: int) -> None:
        A[p], A[r] = A[r], A[p]
        U[p], U[r] = U[r], U[p]
        for row in Uinv:
            row[p], row[r] = row[r], row[p]

    def negate(p: int) -> None:
        A[p] = [-v for v in A[p]]
        U[p] = [-v for v in U[p]]
        for row in Uinv:
            row[p] = -row[p]

    pivot_row = 0
    for col in range(ncols):
        if pivot_row == m:
            break
        for r in range(pivot_row + 1, m):
            b = A[r][col]
            if b == 0:
                continue
            a = A[pivot_row][col]
            if a == 0:
                swap(pivot_row, r)
                continue
            x, y, g = (int(v) for v in igcdex(a, b))
            combine(pivot_row, r, x, y, -(b // g), a // g)
        if A[pivot_row][col] != 0:
            if A[pivot_row][col] < 0:
                negate(pivot_row)
            pivot_row += 1

    return Echelon(
        rank=pivot_row,
        rows=tuple(tuple(r) for r in A[:pivot_row]),
        transform=tuple(tuple(r) for r in U),
        inverse=tuple(tuple(r) for r in Uinv),
    )


def radical(L: Lattice) -> List[LatticeVector]:
    return echelon(L.gram, L.rank).kernel()


def orthogonal_complement(L: Lattice, f: Sequence[int]) -> List[LatticeVector]:
    """Z-basis of {x : inner(x, f) = 0}."""
    column = [(v,) for v in gram_image(L, f)]
    return echelon(column, 1).kernel()


def sublattice(L: Lattice, basis: Sequence[Sequence[int]], label: Optional[str] = None) -> Lattice:
    images = [gram_image(L, b) for b in basis]
    gram = [[sum(u * v for u, v in zip(img, c)) for c in basis] for img in images]
    return new_lattice(gram, label=label)


@dataclass(frozen=True)
class RadicalQuotient:
    """L modulo its radical, with the change of basis that realizes it.

    ``coordinates`` maps a vector of L to its coordinates in the basis
    (radical basis, complement basis); the last ``lattice.rank`` entries are the
    class in the quotient.
    """
    lattice: Optional[Lattice]
    radical: Tuple[LatticeVector, ...]
    complement: Tuple[LatticeVector, ...]
    coordinates: IntMatrix

    def project(self, x: Sequence[int]) -> LatticeVector:
        k = len(self.radical)
        full = [sum(u * v for u, v in zip(row, x)) for row in self.coordinates]
        return tuple(full[k:])


def quotient_by_radical(L: Lattice) -> RadicalQuotient:
    rad = radical(L)
    k = len(rad)
    n = L.rank
    if k == 0:
        ident = tuple(tuple(r) for r in _identity(n))
        return RadicalQuotient(lattice=L, radical=(), complement=ident, coordinates=ident)

    # U·R^T is echelon, so R·U^T = [B 0] with B unimodular (R is saturated).
    # The columns of U^{-1} are then a Z-basis starting with a basis of the radical.
    ech = echelon([[r[i] for r in rad] for i in range(n)], k)
    basis = [tuple(row[i] for row in ech.inverse) for i in range(n)]
    complement = basis[k:]
    label = f"{L.label}/rad" if L.label else None
    return RadicalQuotient(
        lattice=sublattice(L, complement, label=label) if complement else None,
        radical=tuple(rad),
        complement=tuple(complement),
        coordinates=ech.transform,
    )


# ======================================================
# Spans
# ======================================================

@dataclass(frozen=True)
class SpanData:
    rank: int
    basis: Tuple[LatticeVector, ...]
    elementary_divisors: Tuple[int, ...]

    @property
    def index(self) -> Optional[int]:
        """Index of the span in Z^n, or None when the rank is not full."""
        if len(self.basis) == 0 or self.rank < len(self.basis[0]):
            return None
        result = 1
        for d in self.elementary_divisors:
            result *= d
        return result


def elementary_divisors(rows: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    if not rows:
        return ()
    snf = smith_normal_form(Matrix([list(r) for r in rows]), domain=ZZ)
    diag = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    return tuple(d for d in diag if d != 0)


def span(vectors: Iterable[Sequence[int]], ncols: int) -> SpanData:
    ech = echelon(list(vectors), ncols)
    divisors = elementary_divisors(ech.rows)
    logger.debug(f"span rank {ech.rank}, elementary divisors {divisors}")
    return SpanData(rank=ech.rank, basis=ech.rows, elementary_divisors=divisors)
