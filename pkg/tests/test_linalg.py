"""Exact dense linear algebra used by every other module."""

import pytest

from hopfmod.fields import GF, QQ
from hopfmod.linalg import (Mat, NoSolutionError, inverse, nullspace, rank,
                            rref, solve, solve_vec)


def qmat(rows):
    return Mat.from_rows(QQ, [[QQ.parse(x) for x in row] for row in rows])


def test_constructors_and_shape():
    m = qmat([[1, 2], [3, 4]])
    assert (m.nrows, m.ncols) == (2, 2)
    assert Mat.zeros(QQ, 2, 3).is_zero()
    assert Mat.identity(QQ, 4).is_identity()
    col = Mat.column(QQ, [1, 2])
    assert (col.nrows, col.ncols) == (2, 1)
    assert Mat.row_vector(QQ, [1, 2]).transpose() == col


def test_arithmetic():
    a = qmat([[1, 2], [3, 4]])
    b = qmat([[0, 1], [1, 0]])
    assert a + b - b == a
    assert (-a) + a == Mat.zeros(QQ, 2, 2)
    assert a @ b == qmat([[2, 1], [4, 3]])
    assert a.scale(QQ.parse("1/2")) == qmat([["1/2", 1], ["3/2", 2]])
    assert a.trace() == QQ.from_int(5)
    # column convention: (Mv)_a = sum_i M[a][i] v_i
    assert a.apply([QQ.one, QQ.zero]) == [QQ.one, QQ.from_int(3)]
    with pytest.raises(ValueError):
        a @ qmat([[1, 2]])


def test_kron_mixed_shapes():
    a = qmat([[1, 2]])
    b = qmat([[3], [4]])
    k = a.kron(b)
    assert (k.nrows, k.ncols) == (2, 2)
    assert k == qmat([[3, 6], [4, 8]])
    ida, idb = Mat.identity(QQ, 2), Mat.identity(QQ, 3)
    assert ida.kron(idb).is_identity()


def test_rref_and_rank():
    m = qmat([[1, 2, 3], [2, 4, 6], [1, 1, 1]])
    r, pivots = rref(m)
    assert pivots == [0, 1]
    assert rank(m) == 2
    assert rank(Mat.zeros(QQ, 3, 3)) == 0
    assert rank(Mat.identity(QQ, 5)) == 5


def test_nullspace():
    m = qmat([[1, 2, 3], [2, 4, 6]])
    basis = nullspace(m)
    assert len(basis) == 2
    for vec in basis:
        assert all(x == QQ.zero for x in m.apply(vec))
    assert nullspace(Mat.identity(QQ, 3)) == []


def test_solve_and_inverse():
    a = qmat([[2, 1], [1, 1]])
    rhs = qmat([[1], [0]])
    x = solve(a, rhs)
    assert a @ x == rhs
    assert solve_vec(a, [QQ.one, QQ.zero]) == [c[0] for c in x.rows]
    assert a @ inverse(a) == Mat.identity(QQ, 2)
    singular = qmat([[1, 1], [1, 1]])
    with pytest.raises(NoSolutionError):
        solve(singular, rhs)
    with pytest.raises(NoSolutionError):
        inverse(singular)


def test_prime_field_matrices():
    F = GF(3)
    m = Mat.from_rows(F, [[1, 2], [2, 2]])
    assert inverse(m) @ m == Mat.identity(F, 2)
    assert rank(Mat.from_rows(F, [[1, 2], [2, 1]])) == 1  # 2*(1,2) = (2,1) mod 3


def test_underdetermined_solve_is_consistent():
    a = qmat([[1, 1, 1]])
    rhs = qmat([[5]])
    x = solve(a, rhs)
    assert a @ x == rhs
