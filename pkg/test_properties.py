# encoding:utf-8
"""
大规模随机性质测试
ξ 的单调性与 Gorenstein 环上的坍缩、AB 逼近中间项的自由秩、极小逼近的唯一性、
见证映射、稳定 Hom 的恒等式、范畴的包含链与 grade 条件的两种算法
"""

import numpy as np
import pytest

from approx.construct import ab_approximation, fpd_hull, membership, witness_map
from approx.sequences import pad_sequence, verify_ses
from homology.chain import syzygy_morphism
from homology.ext import auslander_sequence_check, ext_map_kernel_dim, grade_condition
from homology.hom import hom_basis, is_stably_zero, stable_hom
from invariants.xi import delta, xi_n, xi_sequence
from ring.corpus import builtin_ring
from rmod.functors import free_rank, is_isomorphic, transpose
from rmod.module import FreeModule, direct_sum, random_module
from rmod.resolution import pd_at_most, syzygy

pytestmark = pytest.mark.slow

ALL_RINGS = ["A", "B", "C", "D", "E"]
GORENSTEIN = ["A", "C", "E"]


def _modules(name, seeds, dim_max):
    ring = builtin_ring(name)
    return [random_module(ring, np.random.default_rng(s), dim_max=dim_max) for s in seeds]


# ---------- ξ ----------

# (环, 首个种子, 模的个数, 维数上限, ξ 的最高次数)
# B、D 上 Betti 数指数增长，取较小的模与次数 6
MONOTONE = [
    ("A", 1000, 45, 9, 8),
    ("C", 2000, 45, 10, 8),
    ("E", 3000, 45, 8, 8),
    ("B", 4000, 33, 5, 6),
    ("D", 5000, 32, 5, 6),
]


@pytest.mark.parametrize("name, start, count, dim_max, n_max", MONOTONE, ids=[m[0] for m in MONOTONE])
def test_xi_is_monotone_and_bounded(name, start, count, dim_max, n_max):
    for module in _modules(name, range(start, start + count), dim_max):
        values = [xi_n(module, n) for n in range(n_max + 1)]
        assert values == sorted(values), module.name
        assert values[-1] <= module.mu


@pytest.mark.parametrize("name, start", [("A", 6000), ("C", 6100), ("E", 6200)])
def test_gorenstein_collapse(name, start):
    for module in _modules(name, range(start, start + 34), 9):
        values = [xi_n(module, n) for n in range(9)]
        assert values == [values[0]] * 9
        report = xi_sequence(module, 8)
        assert report.exact
        assert report.limit == values[0]
        assert delta(module) == values[0]


@pytest.mark.parametrize("name, dim_max", [("A", 9), ("B", 6), ("C", 10), ("D", 7), ("E", 8)])
def test_xi0_is_free_rank_and_additive(name, dim_max):
    sources = _modules(name, range(6500, 6510), dim_max)
    others = _modules(name, range(6600, 6610), dim_max)
    for m, other in zip(sources, others):
        assert xi_n(m, 0) == free_rank(m)
        both, _, _ = direct_sum(m, other)
        assert xi_n(both, 1) == xi_n(m, 1) + xi_n(other, 1)


# ---------- AB 逼近与 FPD 包络 ----------


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ab_mid_free_rank_is_xi(n):
    count = 0
    for name in ALL_RINGS:
        for module in _modules(name, range(7000 + 100 * n, 7006 + 100 * n), 6):
            if not membership(module, n).in_A:
                continue
            seq = ab_approximation(module, n)
            assert free_rank(seq.mid) == xi_n(module, n)
            count += 1
    assert count >= 18


@pytest.mark.parametrize("name", ALL_RINGS)
def test_minimal_approximations_are_unique(name):
    count = 0
    for i, module in enumerate(_modules(name, range(8000, 8006), 7)):
        n = 1 + i % 2
        report = membership(module, n)
        if report.in_A:
            first = ab_approximation(module, n, rng=np.random.default_rng(2 * i + 1))
            second = ab_approximation(module, n, rng=np.random.default_rng(2 * i + 2))
            assert is_isomorphic(first.mid, second.mid)
            assert is_isomorphic(first.left, second.left)
            count += 1
        if report.in_H:
            first = fpd_hull(module, n, rng=np.random.default_rng(2 * i + 1))
            second = fpd_hull(module, n, rng=np.random.default_rng(2 * i + 2))
            assert is_isomorphic(first.mid, second.mid)
            assert is_isomorphic(first.right, second.right)
    assert count >= 3


@pytest.mark.parametrize("name, n", [(name, n) for name in GORENSTEIN for n in (0, 1, 2)])
def test_hull_mu_difference_at_scale(name, n):
    for module in _modules(name, range(8500 + 10 * n, 8504 + 10 * n), 8):
        assert membership(module, n).in_H
        xi = xi_n(module, n)
        seq = fpd_hull(module, n)
        assert seq.mid.mu - seq.right.mu == xi
        padded = pad_sequence(seq, 2)
        assert verify_ses(padded).ok
        assert padded.mid.mu - padded.right.mu == xi


# ---------- 见证映射 ----------


@pytest.mark.parametrize("name, n", [(name, n) for name in GORENSTEIN for n in (1, 2)] + [("D", 1)])
def test_witness_map_detects_xi(name, n):
    ring = builtin_ring(name)
    rng = np.random.default_rng(9000 + n)
    for module in _modules(name, range(9000 + 10 * n, 9005 + 10 * n), 7):
        if not membership(module, n).in_E:
            continue
        result = witness_map(module, n)
        assert result.xi == xi_n(module, n)
        if result.xi:
            assert result.tensor_rank > 0
            assert pd_at_most(result.morphism.target, n)
            continue
        hom = hom_basis(module, FreeModule(ring, 2))
        for _ in range(200):
            assert hom.random_element(rng).tensor_k_rank() == 0


# ---------- 稳定 Hom 的恒等式 ----------


@pytest.mark.parametrize("name, n", [(name, n) for name in ("B", "C", "D", "E") for n in (1, 2, 3)])
def test_adjunction_identity(name, n):
    sources = _modules(name, range(10000, 10009), 6)
    targets = _modules(name, range(10100, 10109), 6)
    for m, other in zip(sources, targets):
        left = transpose(syzygy(transpose(m), n))
        assert stable_hom(m, syzygy(other, n)).dim == stable_hom(left, other).dim


@pytest.mark.parametrize("name", ALL_RINGS)
def test_structural_identities(name):
    sources = _modules(name, range(11000, 11020), 6)
    targets = _modules(name, range(11100, 11120), 6)
    for i, (x, m) in enumerate(zip(sources, targets)):
        inc = m.resolution().syzygy_inclusion(1)
        assert stable_hom(x, m).dim == ext_map_kernel_dim(x, inc, 1)
        assert auslander_sequence_check(x).ok
        hom = hom_basis(x, m)
        if hom.dim == 0:
            continue
        mor = hom.random_element(np.random.default_rng(i))
        n = 1 + i % 3
        a = syzygy_morphism(mor, n, np.random.default_rng(2 * i))
        b = syzygy_morphism(mor, n, np.random.default_rng(2 * i + 1))
        assert is_stably_zero(a - b)


# ---------- 范畴 ----------


@pytest.mark.parametrize("name", ALL_RINGS)
def test_membership_chains(name):
    for module in _modules(name, range(12000, 12008), 5):
        reports = [membership(module, n) for n in range(1, 4)]
        assert reports[0].in_A
        for report in reports:
            assert not report.in_H or report.in_E
            assert not report.in_E or report.in_A
        for lower, upper in zip(reports, reports[1:]):
            assert lower.in_A or not upper.in_A
            assert lower.in_E or not upper.in_E
        for n in range(3):
            if membership(module, n + 1).in_A:
                assert membership(syzygy(module, 1), n).in_H


@pytest.mark.parametrize("name", ALL_RINGS)
def test_first_category_contains_everything(name):
    for module in _modules(name, range(12500, 12510), 9):
        assert membership(module, 1).in_A


@pytest.mark.parametrize("name", ALL_RINGS)
def test_grade_condition_paths_agree(name):
    for module in _modules(name, range(13000, 13008), 7):
        for n in (1, 2, 3):
            assert grade_condition(module, n) == grade_condition(module, n, literal=True)
