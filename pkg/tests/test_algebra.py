import pytest

from stalift.errors import NonAdmissible, NotIdempotent
from stalift.exactla import GF, QQ, Mat, rank
from stalift.algebra import (
    algebra_from_quiver, cartan_matrix, corner_algebra, enveloping_algebra,
    field_algebra, opposite_algebra, quiver, radical_basis,
)
from stalift.fixtures import dual_numbers, path_a2, snake_algebra


def test_dual_numbers_basis():
    # paths modulo x^2: only e and x survive
    a = dual_numbers(QQ)
    assert a.dim == 2
    assert set(a.labels) == {"e_1", "x"}
    x = a.basis_vec(a.labels.index("x"))
    assert a.mul(x, x).is_zero()


def test_a2_basis():
    # path enumeration for 1 -> 2, no relations: e1, e2, and the arrow
    a = path_a2(QQ)
    assert a.dim == 3
    assert len(a.idempotents) == 2


def test_snake_basis():
    # paths mod (aba, bab): e1, e2, a, b, ab, ba
    a = snake_algebra(QQ)
    assert a.dim == 6
    assert sorted(a.labels) == sorted(["e_1", "e_2", "a", "b", "ab", "ba"])


def test_snake_over_f2():
    a = snake_algebra(GF(2))
    assert a.dim == 6


def test_non_admissible_raises():
    # a loop with no relations is infinite-dimensional
    pres = quiver(["1"], [("x", "1", "1")], [], QQ)
    with pytest.raises(NonAdmissible):
        algebra_from_quiver(pres, length_cap=16)


def test_corner_at_unit_is_whole_algebra():
    a = snake_algebra(QQ)
    c, emb = corner_algebra(a, a.unit)
    assert c.dim == a.dim
    assert len(c.idempotents) == 2


def test_corner_of_snake_is_local_dual_numbers():
    # e1 . {basis} . e1 = {e1, ab} and (ab)^2 = abab = 0
    a = snake_algebra(QQ)
    c, emb = corner_algebra(a, a.idempotents[0])
    assert c.dim == 2
    assert len(c.idempotents) == 1
    nonunit = None
    for i in range(c.dim):
        b = c.basis_vec(i)
        if c.mul(b, b).is_zero() and not b.is_zero():
            sq = c.mul(b, b)
            nonunit = b
    assert nonunit is not None


def test_corner_of_a2_at_sink():
    # e2 . A . e2 is one-dimensional
    a = path_a2(QQ)
    c, _ = corner_algebra(a, a.idempotents[1])
    assert c.dim == 1


def test_corner_requires_idempotent():
    a = path_a2(QQ)
    x = a.basis_vec(2)  # the arrow
    with pytest.raises(NotIdempotent):
        corner_algebra(a, x)


def test_opposite_involution():
    a = path_a2(QQ)
    aopop = opposite_algebra(opposite_algebra(a))
    assert [m == n for m, n in zip(aopop.lmul, a.lmul)] == [True] * a.dim


def test_opposite_of_commutative_is_same():
    a = dual_numbers(QQ)
    aop = opposite_algebra(a)
    assert all(m == n for m, n in zip(aop.lmul, a.lmul))


def test_opposite_reverses_a2():
    # arrow composition direction flips: check structure constant transpose
    a = path_a2(QQ)
    aop = opposite_algebra(a)
    i = a.labels.index("a")
    e1, e2 = a.idempotents
    # in A: e1 . a = a and a . e2 = a ; in A^op the two sides swap
    assert aop.mul(e2, aop.basis_vec(i)) == aop.basis_vec(i)
    assert aop.mul(aop.basis_vec(i), e1) == aop.basis_vec(i)


def test_enveloping_field_factor():
    a = path_a2(QQ)
    k = field_algebra(QQ)
    env = enveloping_algebra(a, k)
    assert env.dim == a.dim
    env2 = enveloping_algebra(k, k)
    assert env2.dim == 1


def test_enveloping_dual_numbers():
    a = dual_numbers(QQ)
    env = enveloping_algebra(a, a)
    assert env.dim == 4
    ix = a.labels.index("x")
    x_tensor_1 = _tensor_vec(a, a, a.basis_vec(ix), a.unit)
    one_tensor_x = _tensor_vec(a, a, a.unit, a.basis_vec(ix))
    x_tensor_x = _tensor_vec(a, a, a.basis_vec(ix), a.basis_vec(ix))
    assert env.mul(x_tensor_1, one_tensor_x) == x_tensor_x


def _tensor_vec(a, b, x, y):
    from stalift.algebra import env_tensor_vec
    return env_tensor_vec(a, b, x, y)


def test_cartan_dual_numbers():
    assert cartan_matrix(dual_numbers(QQ)) == [[2]]


def test_cartan_snake():
    assert cartan_matrix(snake_algebra(QQ)) == [[2, 1], [1, 2]]


def test_cartan_entries_sum_to_dim():
    for a in (dual_numbers(QQ), path_a2(QQ), snake_algebra(QQ)):
        c = cartan_matrix(a)
        assert sum(sum(r) for r in c) == a.dim


def test_radical_a2():
    a = path_a2(QQ)
    rad = radical_basis(a)
    assert rad.rows == 1


def test_radical_snake_both_fields():
    for f in (QQ, GF(2)):
        a = snake_algebra(f)
        rad = radical_basis(a)
        assert rad.rows == 4


def test_radical_field_algebra_empty():
    assert radical_basis(field_algebra(QQ)).rows == 0


def test_radical_corner_matches_corner_of_radical():
    # rad(eAe) = e rad(A) e as subspaces
    for f in (QQ, GF(2)):
        a = snake_algebra(f)
        e = a.idempotents[0]
        c, emb = corner_algebra(a, e)
        rad_c = radical_basis(c)
        rad_a = radical_basis(a)
        proj = rad_a @ a.right_mult_matrix(e) @ a.left_mult_matrix(e)
        assert rad_c.rows == rank(proj)
