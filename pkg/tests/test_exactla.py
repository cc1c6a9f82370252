from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from stalift.exactla import (
    GF, QQ, Mat, SubspaceReducer, hstack, inverse, is_invertible,
    kernel_basis, rank, rref, solve,
)


def mat_q(rows):
    return Mat.from_rows(QQ, rows)


def test_rref_identity():
    m = Mat.identity(QQ, 3)
    res = rref(m)
    assert res.reduced == m
    assert res.pivots == (0, 1, 2)
    assert res.rank == 3


def test_rref_zero():
    m = Mat.zeros(QQ, 2, 2)
    res = rref(m)
    assert res.reduced == m
    assert res.pivots == ()
    assert res.rank == 0


def test_rref_rank_one():
    # hand row-reduction: R2 <- R2 - 2*R1 kills the second row
    m = mat_q([[1, 2], [2, 4]])
    res = rref(m)
    assert res.reduced == mat_q([[1, 2], [0, 0]])
    assert res.rank == 1


def test_kernel_identity_empty():
    assert kernel_basis(Mat.identity(QQ, 2)) == []


def test_kernel_zero_full():
    ker = kernel_basis(Mat.zeros(QQ, 1, 3))
    assert len(ker) == 3


def test_kernel_rank_one():
    m = mat_q([[1, 2], [2, 4]])
    ker = kernel_basis(m)
    assert len(ker) == 1
    v = ker[0]
    # m @ v = 0, and v is proportional to (-2, 1)
    assert all(
        m.entry(i, 0) * v[0] + m.entry(i, 1) * v[1] == 0 for i in range(2)
    )
    assert v[0] * Fraction(1) == -2 * v[1]


def test_solve_identity():
    b = mat_q([[3], [5]])
    res = solve(Mat.identity(QQ, 2), b)
    assert res is not None
    assert res.particular == b


def test_solve_inconsistent():
    # substitution: x = 0 from first row contradicts x = 1 from second
    m = mat_q([[1], [1]])
    b = mat_q([[0], [1]])
    assert solve(m, b) is None


def test_solve_mod5():
    # 2 * 3 = 6 = 1 mod 5, verified by multiplication
    f5 = GF(5)
    m = Mat.from_rows(f5, [[2]])
    b = Mat.from_rows(f5, [[1]])
    res = solve(m, b)
    assert res is not None
    assert res.particular.entry(0, 0) == 3
    assert (m @ res.particular) == b


def test_inverse_round_trip():
    m = mat_q([[1, 2], [3, 5]])
    assert is_invertible(m)
    assert m @ inverse(m) == Mat.identity(QQ, 2)


def test_subspace_reducer_residue():
    red = SubspaceReducer(QQ, 3)
    red.add([1, 1, 0])
    assert red.dim == 1
    assert red.contains([2, 2, 0])
    assert not red.contains([1, 0, 0])
    assert red.residue([1, 1, 1]) == (0, 0, 1)


small_prime = st.sampled_from([2, 3, 5, 7, 11, 13])


@st.composite
def fp_matrix(draw):
    p = draw(small_prime)
    r = draw(st.integers(min_value=1, max_value=12))
    c = draw(st.integers(min_value=1, max_value=12))
    data = draw(
        st.lists(
            st.lists(st.integers(min_value=0, max_value=p - 1), min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        )
    )
    return Mat.from_rows(GF(p), data)


@settings(max_examples=60, deadline=None)
@given(fp_matrix())
def test_rank_nullity(m):
    assert rank(m) + len(kernel_basis(m)) == m.cols


@settings(max_examples=60, deadline=None)
@given(fp_matrix())
def test_rref_idempotent(m):
    red = rref(m).reduced
    assert rref(red).reduced == red


@settings(max_examples=60, deadline=None)
@given(fp_matrix())
def test_kernel_vectors_annihilate(m):
    for v in kernel_basis(m):
        col = Mat.from_rows(m.field, [[x] for x in v])
        assert (m @ col).is_zero()


@settings(max_examples=40, deadline=None)
@given(fp_matrix(), st.integers(min_value=0, max_value=100))
def test_solve_exact(m, seed):
    # build a guaranteed-consistent right-hand side m @ x0
    import random

    rng = random.Random(seed)
    x0 = Mat.from_rows(m.field, [[rng.randrange(m.field.p)] for _ in range(m.cols)])
    b = m @ x0
    res = solve(m, b)
    assert res is not None
    assert (m @ res.particular) == b


def test_solve_dimension_mismatch():
    from stalift.errors import DimensionMismatch

    with pytest.raises(DimensionMismatch):
        solve(mat_q([[1, 2]]), mat_q([[1], [2]]))
