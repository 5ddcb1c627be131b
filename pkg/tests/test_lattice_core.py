import random

import pytest

from app.builders import diagonal_lattice, e8, milnor_J, torus_block
from app.errors import DimensionMismatch, EmptyInput, NotSymmetric
from app.lattice_core import (
    determinant,
    echelon,
    elementary_divisors,
    gram_image,
    inner,
    is_root,
    is_unimodular,
    mat_mul,
    mat_vec,
    new_lattice,
    orthogonal_complement,
    quotient_by_radical,
    radical,
    signature,
    span,
    square,
    sublattice,
    transpose,
)

E8_HIGHEST_ROOT = (2, 3, 4, 5, 6, 4, 2, 3)


def random_unimodular(n: int, rng: random.Random, steps: int = 12):
    M = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-2, -1, 1, 2))
        # column operation col_i += c col_j
        for row in M:
            row[i] += c * row[j]
    return tuple(tuple(r) for r in M)


def test_new_lattice_rank_one():
    L = new_lattice([[-2]])
    assert L.rank == 1
    assert L.is_even


def test_new_lattice_hyperbolic_block():
    L = new_lattice([[0, 1], [1, 0]])
    assert L.rank == 2
    assert L.is_even
    assert is_unimodular(L)


def test_new_lattice_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        new_lattice([[0, 1], [2, 0]])


def test_new_lattice_rejects_ragged_and_empty():
    with pytest.raises(DimensionMismatch):
        new_lattice([[0, 1], [1]])
    with pytest.raises(EmptyInput):
        new_lattice([])


def test_inner_examples():
    assert inner(new_lattice([[-2]]), (1,), (1,)) == -2
    assert inner(new_lattice([[0, 1], [1, 0]]), (1, 0), (0, 1)) == 1
    L = e8()
    assert inner(L, L.basis_vector(0), L.basis_vector(0)) == -2


def test_inner_dimension_mismatch():
    L = new_lattice([[0, 1], [1, 0]])
    with pytest.raises(DimensionMismatch):
        inner(L, (1, 0, 0), (0, 1))
    with pytest.raises(DimensionMismatch):
        is_root(L, (1,))


def test_inner_is_bilinear_and_symmetric(rng):
    L = e8()
    for _ in range(200):
        x, y, z = ([rng.randint(-5, 5) for _ in range(8)] for _ in range(3))
        a, b = rng.randint(-4, 4), rng.randint(-4, 4)
        combo = [a * u + b * v for u, v in zip(x, y)]
        assert inner(L, combo, z) == a * inner(L, x, z) + b * inner(L, y, z)
        assert inner(L, x, y) == inner(L, y, x)


@pytest.mark.parametrize("gram,expected", [
    ([[-2, 0, 0], [0, 0, 0], [0, 0, 0]], (0, 2, 1)),
    ([[0, 1], [1, 0]], (1, 0, 1)),
    ([[0, 0], [0, 0]], (0, 2, 0)),
])
def test_signature_examples(gram, expected):
    assert signature(new_lattice(gram)).as_tuple() == expected


def test_signature_e8():
    assert signature(e8()).as_tuple() == (0, 0, 8)


def test_signature_invariant_under_base_change(rng):
    for L in (e8(), milnor_J(1), torus_block(2), diagonal_lattice([-2, 0, 3, 0])):
        expected = signature(L)
        assert sum(expected.as_tuple()) == L.rank
        for _ in range(5):
            U = random_unimodular(L.rank, rng)
            moved = new_lattice(mat_mul(transpose(U), mat_mul(L.gram, U)))
            assert signature(moved) == expected


def test_radical_examples():
    assert len(radical(diagonal_lattice([-2, 0, 0]))) == 2
    assert radical(torus_block(1)) == []
    assert len(radical(milnor_J(1))) == 2


def test_radical_vectors_pair_to_zero():
    L = milnor_J(1)
    for r in radical(L):
        assert gram_image(L, r) == L.zero()


def test_is_root_examples():
    L = diagonal_lattice([-2, 0])
    assert is_root(L, (1, 0))
    assert not is_root(L, (0, 1))
    assert is_root(e8(), E8_HIGHEST_ROOT)
    assert square(e8(), E8_HIGHEST_ROOT) == -2


def test_determinant_and_unimodularity():
    assert abs(determinant(e8())) == 1
    assert determinant(torus_block(2)) == 1
    assert determinant(diagonal_lattice([-2, 3])) == -6
    assert not is_unimodular(diagonal_lattice([-2, 0]))


def test_echelon_transform_is_consistent(rng):
    rows = [[rng.randint(-6, 6) for _ in range(5)] for _ in range(4)]
    ech = echelon(rows, 5)
    product = mat_mul(ech.transform, rows)
    assert [tuple(r) for r in product[:ech.rank]] == list(ech.rows)
    assert all(not any(r) for r in product[ech.rank:])
    n = len(rows)
    assert mat_mul(ech.transform, ech.inverse) == tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def test_orthogonal_complement_of_marked_class(marked_rank12):
    L, f, _ = marked_rank12
    basis = orthogonal_complement(L, f)
    assert len(basis) == L.rank - 1
    assert all(inner(L, b, f) == 0 for b in basis)
    # f is isotropic, so it lies in its own complement
    assert span(list(basis) + [f], L.rank).rank == L.rank - 1


def test_quotient_of_milnor_lattice_is_e8_class():
    quotient = quotient_by_radical(milnor_J(1))
    Q = quotient.lattice
    assert Q.rank == 8
    assert Q.is_even
    assert determinant(Q) == 1
    assert signature(Q).as_tuple() == (0, 0, 8)


def test_quotient_projection_kills_radical():
    L = diagonal_lattice([-2, 0, 0])
    quotient = quotient_by_radical(L)
    assert quotient.lattice.rank == 1
    for r in quotient.radical:
        assert quotient.project(r) == (0,)
    assert [quotient.project(c) for c in quotient.complement] == [(1,)]


def test_quotient_of_totally_isotropic_lattice_is_empty():
    quotient = quotient_by_radical(diagonal_lattice([0, 0]))
    assert quotient.lattice is None
    assert quotient.complement == ()


def test_sublattice_gram():
    L = torus_block(1)
    S = sublattice(L, [(1, 1), (1, -1)])
    assert S.gram == ((2, 0), (0, -2))


def test_span_and_elementary_divisors():
    data = span([(2, 0), (0, 3)], 2)
    assert data.rank == 2
    assert data.index == 6
    assert elementary_divisors([(2, 4), (6, 8)]) == (2, 4)
    assert span([(1, 1), (2, 2)], 2).index is None
    assert mat_vec(((1, 2), (3, 4)), (1, 1)) == (3, 7)
