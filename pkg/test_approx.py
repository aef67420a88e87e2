# encoding:utf-8
"""
余单位、n-AB 逼近、n-origin 扩张、n-FPD 包络、见证映射、序列验证与普查测试
"""

import json

import numpy as np
import pytest

from approx.construct import (
    ab_approximation,
    fpd_hull,
    is_minimal_approximation,
    lifts_through,
    membership,
    minimize_ab,
    origin_extension,
    represented_by_monomorphisms,
    witness_map,
)
from approx.counit import counit_data, counit_psi
from approx.sequences import SeqKind, ShortExactSeq, pad_sequence, seq_from_json, seq_to_json, verify_ses
from common.errors import NotInCategoryError, PreconditionError
from homology.chain import syzygy_morphism
from homology.ext import ext_map_kernel_dim
from homology.hom import hom_basis, is_stably_zero, stable_hom
from invariants.census import run_census
from invariants.xi import xi_n
from ring.corpus import builtin_ring
from rmod.functors import free_rank, free_summand_split, is_isomorphic, transpose
from rmod.module import (
    FreeModule,
    Morphism,
    direct_sum,
    maximal_ideal,
    quotient_by_power,
    random_module,
    residue_field,
    zero_module,
)
from rmod.resolution import syzygy


def _random_modules(name, dim_max, seeds):
    ring = builtin_ring(name)
    return [random_module(ring, np.random.default_rng(s), dim_max=dim_max) for s in seeds]


def _in(category, module, n):
    report = membership(module, n)
    return {"A": report.in_A, "E": report.in_E, "H": report.in_H}[category]


# ---------- 余单位 ----------


def test_counit_of_free_module(ring_b):
    psi = counit_psi(FreeModule(ring_b, 2), 1)
    assert psi.source.dim == 0
    assert psi.target.dim == 6


def test_counit_of_k_over_a(ring_a):
    k = residue_field(ring_a)
    data = counit_data(k, 0)
    assert data.psi.source.dim == 1
    assert data.psi.is_isomorphism()
    assert data.transpose_syzygy.dim == 1
    assert len(data.lifts) == 2
    assert not is_stably_zero(data.psi)


def test_counit_is_equivariant(ring_d):
    for module in _random_modules("D", 12, range(3)):
        for n in range(3):
            counit_psi(module, n).check_equivariance()


def test_counit_rejects_negative_degree(ring_a):
    with pytest.raises(ValueError):
        counit_data(residue_field(ring_a), -1)


@pytest.mark.parametrize("name, dim_max", [("B", 6), ("D", 8)])
def test_adjunction_dimension_identity(name, dim_max):
    for m, n in zip(_random_modules(name, dim_max, range(3)), _random_modules(name, dim_max, range(10, 13))):
        tr = transpose(m)
        if tr.dim == 0:
            continue
        left = transpose(syzygy(tr, 1))
        assert stable_hom(m, syzygy(n, 1)).dim == stable_hom(left, n).dim


@pytest.mark.parametrize("name, dim_max", [("B", 6), ("C", 8), ("D", 8)])
def test_stable_hom_as_ext_kernel(name, dim_max):
    for x, m in zip(_random_modules(name, dim_max, range(20, 24)), _random_modules(name, dim_max, range(30, 34))):
        inc = m.resolution().syzygy_inclusion(1)
        assert stable_hom(x, m).dim == ext_map_kernel_dim(x, inc, 1)


def test_syzygy_map_is_stably_well_defined(ring_d):
    source, target = _random_modules("D", 8, [40, 41])
    hom = hom_basis(source, target)
    for mor in hom.basis[:3]:
        a = syzygy_morphism(mor, 2, np.random.default_rng(1))
        b = syzygy_morphism(mor, 2, np.random.default_rng(2))
        assert is_stably_zero(a - b)


# ---------- n-AB 逼近 ----------


def test_ab_of_k_over_a(ring_a):
    seq = ab_approximation(residue_field(ring_a), 1)
    assert seq.kind == SeqKind.AB
    assert seq.left.dim == 0
    assert seq.mid.dim == 1
    assert is_minimal_approximation(seq)


def test_ab_of_ring(ring_a):
    seq = ab_approximation(FreeModule(ring_a, 1), 2)
    assert seq.left.dim == 0
    assert free_rank(seq.mid) == 1


def test_ab_of_degree_zero_is_identity(ring_b):
    k = residue_field(ring_b)
    seq = ab_approximation(k, 0)
    assert seq.left.dim == 0
    assert seq.surj.is_isomorphism()


def test_ab_of_k_over_b(ring_b):
    seq = ab_approximation(residue_field(ring_b), 1)
    assert verify_ses(seq).ok
    assert is_minimal_approximation(seq)


def test_padded_ab_is_not_minimal(ring_b):
    seq = ab_approximation(residue_field(ring_b), 1)
    padded = pad_sequence(seq, 2)
    assert padded.mid.dim == seq.mid.dim + 6
    assert verify_ses(padded).ok
    assert not is_minimal_approximation(padded)
    again = minimize_ab(padded)
    assert is_minimal_approximation(again)
    assert again.mid.dim == seq.mid.dim


def test_ab_requires_category(ring_b):
    # Ω²k ≅ k⁴ 不自反
    k = residue_field(ring_b)
    assert _in("A", k, 1)
    with pytest.raises(NotInCategoryError) as e:
        ab_approximation(k, 2)
    assert e.value.category == "A"
    assert e.value.exit_code == 5
    assert e.value.witness.startswith("Ext^")


@pytest.mark.parametrize("name, dim_max", [("B", 9), ("C", 12), ("D", 12), ("E", 8)])
def test_free_rank_of_ab_equals_xi(name, dim_max):
    for module in _random_modules(name, dim_max, range(100, 106)):
        for n in (1, 2):
            if not _in("A", module, n):
                continue
            seq = ab_approximation(module, n)
            assert free_rank(seq.mid) == xi_n(module, n)


@pytest.mark.parametrize("name, dim_max", [("A", 9), ("C", 12), ("D", 12)])
def test_minimal_ab_is_unique(name, dim_max):
    for module in _random_modules(name, dim_max, range(110, 114)):
        if not _in("A", module, 1):
            continue
        first = ab_approximation(module, 1, rng=np.random.default_rng(1))
        second = ab_approximation(module, 1, rng=np.random.default_rng(2))
        assert is_isomorphic(first.mid, second.mid)
        assert is_isomorphic(first.left, second.left)


def test_maps_lift_through_ab_over_gorenstein(ring_c):
    seq = ab_approximation(quotient_by_power(ring_c, 2), 1)
    source = maximal_ideal(ring_c)
    hom = hom_basis(source, seq.right)
    assert hom.dim > 0
    for mor in hom.basis:
        h = lifts_through(seq, mor)
        assert h is not None
        assert np.array_equal(ring_c.field.matmul(seq.surj.mat, h.mat), mor.mat)


# ---------- n-origin 扩张 ----------


def test_origin_of_ring(ring_b):
    seq = origin_extension(FreeModule(ring_b, 1), 1)
    assert seq.kind == SeqKind.ORIGIN
    assert seq.right.dim == 0


def test_origin_over_self_injective(ring_a):
    seq = origin_extension(residue_field(ring_a), 2)
    y = seq.right
    assert free_rank(y) * ring_a.dim == y.dim
    assert verify_ses(seq).ok


def test_origin_requires_grade_condition(ring_b):
    with pytest.raises(NotInCategoryError) as e:
        origin_extension(residue_field(ring_b), 1)
    assert e.value.category == "E"
    assert e.value.witness == "Ext^1(k,B) != 0"


def test_origin_cannot_be_padded(ring_a):
    seq = origin_extension(residue_field(ring_a), 1)
    with pytest.raises(PreconditionError):
        pad_sequence(seq, 1)


@pytest.mark.parametrize("name, dim_max", [("A", 9), ("C", 12), ("E", 8)])
def test_random_origin_extensions_verify(name, dim_max):
    for module in _random_modules(name, dim_max, range(120, 124)):
        seq = origin_extension(module, 1)
        assert verify_ses(seq).ok


def test_represented_by_monomorphisms(ring_b):
    k = residue_field(ring_b)
    r = FreeModule(ring_b, 1)
    assert represented_by_monomorphisms(Morphism(k, r, [[0], [1], [0]])).represented
    zero = zero_module(ring_b)
    result = represented_by_monomorphisms(k.zero_map_to(zero))
    assert result.represented
    assert result.witness.source is k
    tr = transpose(k)
    assert not represented_by_monomorphisms(tr.zero_map_to(zero)).represented


# ---------- n-FPD 包络 ----------


def test_hull_of_k_over_a(ring_a):
    seq = fpd_hull(residue_field(ring_a), 0)
    assert seq.kind == SeqKind.HULL
    assert is_isomorphic(seq.mid, FreeModule(ring_a, 1))
    assert seq.mid.mu - seq.right.mu == 0
    assert is_minimal_approximation(seq)


def test_hull_of_ring(ring_d):
    seq = fpd_hull(FreeModule(ring_d, 1), 1)
    assert seq.right.dim == 0


def test_hull_requires_category(ring_b):
    with pytest.raises(NotInCategoryError) as e:
        fpd_hull(residue_field(ring_b), 1)
    assert e.value.category == "H"


@pytest.mark.parametrize(
    "name, dim_max, n",
    [("A", 9, 0), ("B", 9, 0), ("C", 12, 0), ("D", 12, 0), ("E", 8, 0), ("A", 9, 1), ("C", 12, 1), ("E", 8, 1)],
)
def test_hull_mu_difference_is_xi(name, dim_max, n):
    for module in _random_modules(name, dim_max, range(130, 135)):
        if not _in("H", module, n):
            continue
        xi = xi_n(module, n)
        seq = fpd_hull(module, n)
        assert seq.mid.mu - seq.right.mu == xi
        padded = pad_sequence(seq, 1)
        assert verify_ses(padded).ok
        assert padded.mid.mu - padded.right.mu == xi


# ---------- 见证映射 ----------


def test_witness_with_free_summand(ring_a):
    module, _, _ = direct_sum(FreeModule(ring_a, 1), residue_field(ring_a))
    result = witness_map(module, 1)
    assert result.xi == 1
    assert not result.is_none_certificate
    assert result.tensor_rank > 0
    assert result.to_dict()["certificate"] == "witness"


def test_witness_none_certificate(ring_a):
    k = residue_field(ring_a)
    result = witness_map(k, 1)
    assert result.is_none_certificate
    assert result.to_dict() == {"xi": 0, "certificate": "none"}
    hom = hom_basis(k, FreeModule(ring_a, 2))
    rng = np.random.default_rng(9)
    for _ in range(200):
        assert hom.random_element(rng).tensor_k_rank() == 0


def test_witness_of_ring(ring_c):
    result = witness_map(FreeModule(ring_c, 1), 2)
    assert result.xi == 1
    assert result.tensor_rank == 1


def test_witness_requires_category(ring_b):
    with pytest.raises(NotInCategoryError):
        witness_map(residue_field(ring_b), 1)


@pytest.mark.parametrize("name, dim_max", [("A", 9), ("C", 12), ("E", 8)])
def test_witness_agrees_with_xi(name, dim_max):
    ring = builtin_ring(name)
    rng = np.random.default_rng(140)
    for module in _random_modules(name, dim_max, range(140, 145)):
        result = witness_map(module, 1)
        if result.xi:
            assert result.tensor_rank > 0
            continue
        hom = hom_basis(module, FreeModule(ring, 2))
        for _ in range(50):
            assert hom.random_element(rng).tensor_k_rank() == 0


# ---------- 成员判定 ----------


def test_membership_over_self_injective(ring_a):
    for module in _random_modules("A", 9, range(3)):
        for n in range(3):
            report = membership(module, n)
            assert report.in_A and report.in_E and report.in_H


def test_membership_of_k_over_b(ring_b):
    report = membership(residue_field(ring_b), 1)
    assert (report.in_A, report.in_E, report.in_H) == (True, False, False)
    assert report.witnesses["E"] == "Ext^1(k,B) != 0"
    assert set(report.to_dict()) == {"module", "n", "in_A", "in_E", "in_H", "witnesses"}


def test_membership_of_ring(ring_d):
    report = membership(FreeModule(ring_d, 1), 2)
    assert report.in_A and report.in_E and report.in_H
    assert report.witnesses == {}


@pytest.mark.parametrize("name, dim_max", [("B", 9), ("D", 12)])
def test_membership_chain(name, dim_max):
    for module in _random_modules(name, dim_max, range(150, 156)):
        for n in range(3):
            report = membership(module, n)
            assert not report.in_H or report.in_E
            assert not report.in_E or report.in_A
            if _in("A", module, n + 1):
                assert _in("H", syzygy(module, 1), n)


# ---------- 序列验证与 JSON ----------


def test_verify_reports_failures(ring_a):
    k = residue_field(ring_a)
    r = FreeModule(ring_a, 1)
    seq = ShortExactSeq(k, r, r, k.zero_map_to(r), r.identity(), SeqKind.AB, 0)
    report = verify_ses(seq)
    assert not report.ok
    assert "injective" in report.failures()
    assert "exactness" not in report.failures()

    broken = ShortExactSeq(k, r, k, Morphism(k, r, [[0], [0], [1]]), Morphism(r, k, [[1, 0, 0]]), SeqKind.AB, 0)
    assert "exactness" in verify_ses(broken).failures()


def test_verify_checks_mid_ext(ring_b):
    k = residue_field(ring_b)
    zero = zero_module(ring_b)
    seq = ShortExactSeq(zero, k, k, zero.zero_map_to(k), k.identity(), SeqKind.AB, 2)
    report = verify_ses(seq)
    assert report.failures() == ["mid-ext"]
    detail = [c.detail for c in report.clauses if c.name == "mid-ext"][0]
    assert "degree 1" in detail


def test_sequence_json_round_trip(ring_b):
    seq = ab_approximation(residue_field(ring_b), 1)
    data = json.loads(json.dumps(seq_to_json(seq)))
    again = seq_from_json(data)
    assert again.kind == SeqKind.AB
    assert again.n == 1
    assert np.array_equal(again.surj.mat, seq.surj.mat)
    assert verify_ses(again).ok


def test_origin_json_keeps_base(ring_a):
    seq = origin_extension(residue_field(ring_a), 1)
    again = seq_from_json(seq_to_json(seq), ring_a)
    assert again.base is not None
    assert verify_ses(again).ok


# ---------- 自由模与零模 ----------

TRIVIAL = [(name, rank) for name in ("A", "B", "C", "D", "E") for rank in (0, 1, 2)]
TRIVIAL_IDS = [f"{name}-R{rank}" for name, rank in TRIVIAL]


def _free_or_zero(name, rank):
    ring = builtin_ring(name)
    return FreeModule(ring, rank) if rank else zero_module(ring)


@pytest.mark.parametrize("name, rank", TRIVIAL, ids=TRIVIAL_IDS)
def test_xi_of_free_and_zero_modules(name, rank):
    module = _free_or_zero(name, rank)
    for n in range(4):
        assert xi_n(module, n) == rank


@pytest.mark.parametrize("name, rank", TRIVIAL, ids=TRIVIAL_IDS)
def test_hom_with_zero_module(name, rank):
    module = _free_or_zero(name, rank)
    zero = zero_module(module.ring)
    assert hom_basis(zero, module).dim == 0
    assert hom_basis(module, zero).dim == 0
    assert stable_hom(module, zero).dim == 0


@pytest.mark.parametrize("name, rank", TRIVIAL, ids=TRIVIAL_IDS)
def test_free_summand_split_of_free_and_zero_modules(name, rank):
    split = free_summand_split(_free_or_zero(name, rank))
    assert split.free_rank == rank
    assert split.stable.dim == 0


@pytest.mark.parametrize("name, rank", TRIVIAL, ids=TRIVIAL_IDS)
def test_origin_and_hull_of_free_and_zero_modules(name, rank):
    module = _free_or_zero(name, rank)
    for n in (1, 2):
        origin = origin_extension(module, n)
        assert origin.right.dim == 0
        assert verify_ses(origin).ok
        hull = fpd_hull(module, n)
        assert hull.right.dim == 0
        assert hull.mid.mu - hull.right.mu == rank
        assert verify_ses(hull).ok


def test_deep_syzygy_of_free_module(ring_a):
    omega = syzygy(FreeModule(ring_a, 1), 3)
    assert omega.dim == 0


# ---------- 普查 ----------


def test_census_is_deterministic(ring_b):
    first = run_census(ring_b, count=4, dim_max=9, seed=5, workers=1, n_max=3)
    second = run_census(ring_b, count=4, dim_max=9, seed=5, workers=1, n_max=3)
    assert first.to_dict() == second.to_dict()
    assert "seed=5" in first.table()


def test_census_over_self_injective(ring_a):
    report = run_census(ring_a, count=5, dim_max=9, seed=1, workers=1, n_max=3)
    stats = report.stats()
    assert stats["completed"] == 5
    assert stats["constant_profiles"] == 5
    for entry in report.entries:
        assert entry.membership[1] == (True, True, True)


def test_census_over_square_zero_ring(ring_b):
    report = run_census(ring_b, count=5, dim_max=9, seed=2, workers=1, n_max=3)
    stats = report.stats()
    assert stats["profile_equals_free_rank"] == stats["completed"]
    assert stats["with_jumps"] == 0


def test_census_with_workers_matches_sequential(ring_e):
    sequential = run_census(ring_e, count=3, dim_max=8, seed=4, workers=1, n_max=2)
    parallel = run_census(ring_e, count=3, dim_max=8, seed=4, workers=2, n_max=2)
    assert sequential.to_dict() == parallel.to_dict()
