# encoding:utf-8
"""
素域线性代数测试
"""

import numpy as np
import pytest

from common.errors import DimensionMismatchError, ParseError
from lib.exactla import PrimeField, get_field


@pytest.mark.parametrize("p", [2, 3, 101])
def test_field_accepts_primes(p):
    assert get_field(p).p == p
    assert get_field(p) is get_field(p)


@pytest.mark.parametrize("p", [0, 1, 4, 100])
def test_field_rejects_non_primes(p):
    with pytest.raises(ParseError):
        PrimeField(p)


def test_inverse_mod_p():
    f = get_field(101)
    for a in range(1, 101):
        assert (a * f.inv(a)) % 101 == 1
    with pytest.raises(ZeroDivisionError):
        f.inv(0)


def test_rref_is_deterministic():
    f = get_field(7)
    m = np.array([[0, 2, 4], [3, 1, 0], [3, 3, 4]])
    r1, p1 = f.rref(m)
    r2, p2 = f.rref(m.copy())
    assert np.array_equal(r1, r2) and p1 == p2
    assert p1 == [0, 1]
    assert f.rank(m) == 2


def test_kernel_basis_annihilates():
    f = get_field(5)
    rng = np.random.default_rng(3)
    m = f.random_matrix(rng, 3, 6)
    k = f.kernel_basis(m)
    assert k.shape == (6, 6 - f.rank(m))
    assert not np.any(f.matmul(m, k))


def test_solve_and_inconsistent_system():
    f = get_field(2)
    m = np.array([[1, 1], [0, 0]])
    assert np.array_equal(f.solve(m, np.array([1, 0])), np.array([1, 0]))
    assert f.solve(m, np.array([0, 1])) is None
    with pytest.raises(DimensionMismatchError):
        f.solve(m, np.array([1, 0, 0]))


def test_inverse_and_left_inverse():
    f = get_field(101)
    rng = np.random.default_rng(1)
    m = f.random_matrix(rng, 4, 4)
    while f.rank(m) < 4:
        m = f.random_matrix(rng, 4, 4)
    assert np.array_equal(f.matmul(f.inverse(m), m), f.eye(4))
    k = m[:, :2]
    assert np.array_equal(f.matmul(f.left_inverse(k), k), f.eye(2))
    with pytest.raises(ZeroDivisionError):
        f.inverse(np.zeros((2, 2), dtype=np.int64))


def test_subspace_operations():
    f = get_field(3)
    u = np.array([[1, 0], [0, 1], [0, 0]])
    w = np.array([[1], [1], [1]])
    assert f.subspace_sum(u, w).shape[1] == 3
    assert f.subspace_intersection(u, w).shape[1] == 0
    assert f.contains(u, np.array([2, 1, 0]))
    assert not f.contains(u, np.array([0, 0, 1]))
    assert f.quotient_dim(w, u) == 1


def test_quotient_map_splits():
    f = get_field(101)
    u = np.array([[1], [2], [3]])
    q, s = f.quotient_map(u)
    assert q.shape == (2, 3)
    assert not np.any(f.matmul(q, u))
    assert np.array_equal(f.matmul(q, s), f.eye(2))


def test_matmul_dimension_check():
    f = get_field(2)
    with pytest.raises(DimensionMismatchError):
        f.matmul(np.zeros((2, 3)), np.zeros((2, 3)))
