# encoding:utf-8
"""
Hom、稳定 Hom、Ext、grade 与链提升测试
"""

import numpy as np
import pytest

from homology.chain import lift_morphism, syzygy_morphism
from homology.ext import (
    auslander_sequence_check,
    ext,
    ext_map_kernel_dim,
    ext_module,
    ext_ring,
    first_nonvanishing_ext,
    grade,
    grade_condition,
    n_torsionfree,
)
from homology.hom import (
    dual_morphism,
    evaluation_map,
    factor_through_cover,
    hom_basis,
    is_stably_zero,
    stable_hom,
)
from rmod.module import (
    FreeModule,
    Morphism,
    direct_sum,
    maximal_ideal,
    quotient_by_power,
    residue_field,
    zero_module,
)
from rmod.resolution import free_cover


def test_hom_dimensions(ring_b, ring_c):
    k_b = residue_field(ring_b)
    assert hom_basis(k_b, k_b).dim == 1
    assert hom_basis(k_b, FreeModule(ring_b, 1)).dim == 2
    assert hom_basis(residue_field(ring_c), FreeModule(ring_c, 1)).dim == 1
    m = maximal_ideal(ring_c)
    assert hom_basis(FreeModule(ring_c, 1), m).dim == m.dim


def test_hom_basis_is_equivariant(ring_d):
    m = quotient_by_power(ring_d, 2)
    n = maximal_ideal(ring_d)
    hom = hom_basis(m, n)
    assert hom.dim > 0
    for mor in hom.basis:
        mor.check_equivariance()
    rng = np.random.default_rng(5)
    x = hom.random_element(rng)
    assert np.array_equal(hom.combine(hom.coords(x.mat)[:, 0]).mat, x.mat)


def test_stable_hom(ring_a, ring_b):
    k = residue_field(ring_a)
    assert stable_hom(k, k).dim == 1
    r = FreeModule(ring_b, 1)
    k_b = residue_field(ring_b)
    assert hom_basis(r, k_b).dim == 1
    assert stable_hom(r, k_b).dim == 0


def test_factor_through_cover(ring_b):
    k = residue_field(ring_b)
    cover = free_cover(k)
    assert is_stably_zero(cover)
    h = factor_through_cover(cover)
    assert h is not None
    assert np.array_equal(ring_b.field.matmul(cover.mat, h.mat), cover.mat)
    assert factor_through_cover(k.identity()) is None
    assert not is_stably_zero(k.identity())


def test_ext_over_b(ring_b):
    k = residue_field(ring_b)
    assert ext_ring(k, 0).dim == 2
    assert ext_ring(k, 1).dim == 3
    assert ext_module(k, 1).dim == 3
    for i in range(3):
        assert ext(k, k, i).dim == k.resolution().betti(i)


def test_ext_cocycles(ring_b):
    k = residue_field(ring_b)
    report = ext(k, FreeModule(ring_b, 1), 1, with_cocycles=True)
    assert report.cocycles.shape[1] == report.dim


def test_ext_vanishes_over_self_injective(ring_a):
    k = residue_field(ring_a)
    assert first_nonvanishing_ext(k, 1, 4) is None
    assert n_torsionfree(k, 3)
    assert grade_condition(k, 2)
    assert grade_condition(k, 2, literal=True)


def test_grade(ring_b):
    k = residue_field(ring_b)
    assert grade(k, 3).value == 0
    free = FreeModule(ring_b, 1)
    assert grade(free, 2).value == 0
    assert str(grade(free, 2)) == "0"


def test_grade_cutoff_is_exclusive(ring_b):
    k = residue_field(ring_b)
    assert grade(k, 0).value is None
    assert str(grade(k, 0)) == ">= 0"
    assert grade(k, 1).value == 0
    zero = zero_module(ring_b)
    assert grade(zero, 3).value is None
    assert str(grade(zero, 3)) == ">= 3"


def test_grade_condition_fails_for_k_over_b(ring_b):
    k = residue_field(ring_b)
    assert not grade_condition(k, 1)
    assert not grade_condition(k, 1, literal=True)


@pytest.mark.parametrize("name", ["A", "B", "C", "D"])
def test_auslander_sequence(name):
    from ring.corpus import builtin_ring

    ring = builtin_ring(name)
    for module in (residue_field(ring), maximal_ideal(ring), quotient_by_power(ring, 2)):
        assert auslander_sequence_check(module).ok


def test_auslander_sequence_of_k_over_b(ring_b):
    report = auslander_sequence_check(residue_field(ring_b))
    assert report.ker_phi == 0
    assert report.coker_phi == 3


def test_evaluation_map_of_free_module(ring_c):
    phi = evaluation_map(FreeModule(ring_c, 2))
    assert phi.is_isomorphism()


def test_dual_morphism(ring_b):
    m = maximal_ideal(ring_b)
    ident = dual_morphism(m.identity())
    assert np.array_equal(ident.mat, np.eye(ident.source.dim, dtype=np.int64))
    k = residue_field(ring_b)
    total, inj, proj = direct_sum(k, FreeModule(ring_b, 1))
    composite = dual_morphism(proj[0].compose(inj[0]))
    chained = dual_morphism(inj[0]).compose(dual_morphism(proj[0]))
    assert np.array_equal(composite.mat, chained.mat)


def test_ext_map_kernel(ring_b):
    k = residue_field(ring_b)
    r = FreeModule(ring_b, 1)
    assert ext_map_kernel_dim(k, r.identity(), 1) == 0
    assert ext_map_kernel_dim(k, r.zero_map_to(r), 1) == 3


def _check_chain(lift, degree):
    mor = lift.morphism
    f = mor.field
    res_m = mor.source.resolution()
    res_n = mor.target.resolution()
    lhs = f.matmul(res_n.cover_matrix(), lift.maps[0].expand())
    rhs = f.matmul(mor.mat, res_m.cover_matrix())
    assert np.array_equal(lhs, rhs)
    for i in range(1, degree + 1):
        lhs = f.matmul(res_n.differential(i).expand(), lift.maps[i].expand())
        rhs = f.matmul(lift.maps[i - 1].expand(), res_m.differential(i).expand())
        assert np.array_equal(lhs, rhs)


@pytest.mark.parametrize("seed", [None, 1, 2])
def test_lift_morphism_commutes(ring_d, seed):
    m = quotient_by_power(ring_d, 2)
    k = residue_field(ring_d)
    mor = hom_basis(m, k).basis[0]
    rng = None if seed is None else np.random.default_rng(seed)
    lift = lift_morphism(mor, 2, rng)
    assert lift.degree == 2
    _check_chain(lift, 2)


def test_syzygy_of_identity(ring_b):
    k = residue_field(ring_b)
    omega = syzygy_morphism(k.identity(), 1)
    assert omega.is_isomorphism()
    omega.check_equivariance()


def test_syzygy_of_zero_map(ring_c):
    k = residue_field(ring_c)
    m = maximal_ideal(ring_c)
    zero = Morphism(m, k, np.zeros((1, m.dim), dtype=np.int64))
    assert syzygy_morphism(zero, 2).is_zero()
