# encoding:utf-8
"""
n-AB 逼近（含极小化）、n-origin 扩张、n-FPD 包络、范畴成员判定与见证映射
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from approx.counit import counit_psi
from approx.sequences import SeqKind, ShortExactSeq, verify_ses
from common.errors import EngineCheckError, NotInCategoryError, PreconditionError
from common.logger import logger
from homology.ext import first_nonvanishing_ext, torsionfree_failure
from homology.hom import dual_module, dual_morphism, evaluation_map, hom_basis, ring_dual_hom
from rmod.functors import free_rank, free_summand_split
from rmod.module import (
    FreeModule,
    Module,
    Morphism,
    cokernel,
    direct_sum,
    generators_modulo,
    kernel,
    submodule,
    zero_module,
)
from rmod.resolution import free_cover, pd_at_most, syzygy


# ---------- 范畴成员 ----------


@dataclass
class MembershipReport:
    name: str
    n: int
    in_A: bool
    in_E: bool
    in_H: bool
    witnesses: Dict[str, str] = field(default_factory=dict)
    degrees: Dict[str, Optional[int]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "module": self.name,
            "n": self.n,
            "in_A": self.in_A,
            "in_E": self.in_E,
            "in_H": self.in_H,
            "witnesses": dict(self.witnesses),
        }


def membership(module: Module, n: int) -> MembershipReport:
    """
    in_A ⟺ ΩⁿM 为 n-torsionfree；in_E ⟺ 第 n 个 grade 条件；in_H ⟺ ΩⁿM 为 (n+1)-torsionfree
    """
    if n < 0:
        raise ValueError("membership degree must be nonnegative")
    omega = syzygy(module, n)
    ring_name = module.ring.name or "R"
    a_fail = torsionfree_failure(omega, n)
    e_fail = first_nonvanishing_ext(module, 1, n) if n >= 1 else None
    h_fail = a_fail if a_fail is not None else torsionfree_failure(omega, n + 1)
    report = MembershipReport(module.name, n, a_fail is None, e_fail is None, h_fail is None)
    report.degrees = {"A": a_fail, "E": e_fail, "H": h_fail}
    if a_fail is not None:
        report.witnesses["A"] = f"Ext^{a_fail}(Tr Ω^{n} {module.name}, {ring_name}) != 0"
    if e_fail is not None:
        report.witnesses["E"] = f"Ext^{e_fail}({module.name},{ring_name}) != 0"
    if h_fail is not None:
        report.witnesses["H"] = f"Ext^{h_fail}(Tr Ω^{n} {module.name}, {ring_name}) != 0"
    if (report.in_H and not report.in_E) or (report.in_E and not report.in_A):
        logger.error(f"[Membership] inclusion chain broken for {module.name}, n={n}: {report.to_dict()}")
        raise EngineCheckError("membership flags violate H ⊆ E ⊆ A", report.to_dict())
    return report


def _require(report: MembershipReport, category: str):
    flag = {"A": report.in_A, "E": report.in_E, "H": report.in_H}[category]
    if not flag:
        raise NotInCategoryError(category, report.n, report.degrees.get(category), report.witnesses[category])


# ---------- 左自由逼近 ----------


def left_free_approximation(module: Module, modulo: Optional[np.ndarray] = None) -> Tuple[np.ndarray, int]:
    """
    s : X → R^m，分量取 X*（或 X*/modulo）的极小生成元，故 s* 的像加上 modulo 即 X*
    :return: (m·d × D_X 矩阵, m)
    """
    f = module.field
    d = module.ring.dim
    star = dual_module(module)
    if star.dim == 0:
        return f.zeros(0, module.dim), 0
    gens = generators_modulo(star, modulo)
    m = gens.shape[1]
    mats = np.einsum("tm,tay->may", gens, ring_dual_hom(module).mats) % f.p
    return mats.reshape(m * d, module.dim), m


# ---------- n-AB 逼近 ----------


def ab_approximation(
    module: Module, n: int, minimize: bool = True, rng: Optional[np.random.Generator] = None
) -> ShortExactSeq:
    """
    0 → Y → TrΩⁿTrΩⁿM ⊕ R^{μ(M)} →(ψ, π) M → 0
    n = 0 时取恒等序列 0 → 0 → M → M → 0
    """
    _require(membership(module, n), "A")
    ring = module.ring
    if n == 0:
        zero = zero_module(ring)
        seq = ShortExactSeq(zero, module, module, zero.zero_map_to(module), module.identity(), SeqKind.AB, 0)
    else:
        psi = counit_psi(module, n, rng)
        cover = free_cover(module)
        mid, _, _ = direct_sum(psi.source, cover.source, name=f"{psi.source.name} + R^{cover.source.rank}")
        surj = Morphism(mid, module, np.hstack([psi.mat, cover.mat]))
        left, inj = kernel(surj, f"Y_{n}({module.name})")
        seq = ShortExactSeq(left, mid, module, inj, surj, SeqKind.AB, n)
        if minimize:
            seq = minimize_ab(seq)
    logger.info(f"[ABApprox] {module.name}, n={n}: mid dim {seq.mid.dim}, left dim {seq.left.dim}")
    _certify(seq)
    return seq


def _split_surjection(seq: ShortExactSeq):
    """mid ≅ X̄ ⊕ F' 时 p = surj∘backward 的两个分量 p_0, p_1"""
    split = free_summand_split(seq.mid)
    p = seq.mid.field.matmul(seq.surj.mat, split.backward.mat)
    sd = split.stable.dim
    return split, p[:, :sd], p[:, sd:]


def minimize_ab(seq: ShortExactSeq) -> ShortExactSeq:
    """
    逐个剥离 left 与 mid 的公共自由直和项，直到 μ(F') = μ(coker p_0)
    每步在 ker(F' → coker p_0) 中找某块常数项非零的元素，去掉该块
    """
    if seq.kind != SeqKind.AB:
        raise PreconditionError("minimize_ab expects an AB approximation")
    module = seq.right
    f = module.field
    d = module.ring.dim
    split, p0, p1 = _split_surjection(seq)
    stable = split.stable
    c_mod, c_proj = cokernel(Morphism(stable, module, p0), "coker p0")
    target = c_mod.mu
    a = split.free_rank
    dropped = 0
    while a > target:
        g = f.matmul(c_proj.mat, p1)
        k = f.kernel_basis(g)
        hit = None
        for j in range(a):
            cols = np.flatnonzero(k[j * d])
            if cols.size:
                hit = j
                break
        if hit is None:
            raise EngineCheckError("no unit element in the kernel of a non-minimal free cover")
        keep = [c for c in range(a * d) if not (hit * d <= c < (hit + 1) * d)]
        p1 = p1[:, keep]
        a -= 1
        dropped += 1
    free = FreeModule(module.ring, a)
    mid, _, _ = direct_sum(stable, free, name=f"{stable.name} + R^{a}")
    surj = Morphism(mid, module, np.hstack([p0, p1]))
    left, inj = kernel(surj, seq.left.name)
    logger.debug(f"[ABApprox] minimization removed {dropped} free summand(s) of {module.name}")
    return ShortExactSeq(left, mid, module, inj, surj, SeqKind.AB, seq.n)


def is_minimal_approximation(seq: ShortExactSeq) -> bool:
    """
    AB：mid = X̄ ⊕ F，μ(F) = μ(coker p_0)
    HULL：right 没有自由直和项
    """
    if seq.kind == SeqKind.HULL:
        return free_rank(seq.right) == 0
    if seq.kind != SeqKind.AB:
        raise PreconditionError("minimality is defined for AB approximations and FPD hulls")
    split, p0, _ = _split_surjection(seq)
    c_mod, _ = cokernel(Morphism(split.stable, seq.right, p0))
    return split.free_rank == c_mod.mu


def _certify(seq: ShortExactSeq):
    report = verify_ses(seq)
    if not report.ok:
        logger.error(f"[Approx] constructed sequence fails verification: {report.failures()}")
        raise EngineCheckError("constructed sequence fails verification", report.to_dict())


# ---------- n-origin 扩张 ----------


def origin_extension(module: Module, n: int, rng: Optional[np.random.Generator] = None) -> ShortExactSeq:
    """
    0 → X →(f,s)^T M ⊕ R^m → Y → 0，(X, f) 为极小 n-AB 逼近
    s 的分量取 X*/f*(M*) 的极小生成元
    """
    _require(membership(module, n), "E")
    ring = module.ring
    f = module.field
    ab = ab_approximation(module, n, minimize=True, rng=rng)
    x_mod, p = ab.mid, ab.surj
    image = f.column_space(dual_morphism(p).mat)
    s, m = left_free_approximation(x_mod, image)
    free = FreeModule(ring, m)
    mid, _, _ = direct_sum(module, free, name=f"{module.name} + R^{m}")
    inj = Morphism(x_mod, mid, np.vstack([p.mat, s]))
    if not inj.is_injective():
        logger.error(f"[Origin] (f,s)^T is not injective for {module.name}, n={n}")
        raise EngineCheckError("(f,s)^T is not injective")
    right, surj = cokernel(inj, f"Y({module.name})")
    seq = ShortExactSeq(x_mod, mid, right, inj, surj, SeqKind.ORIGIN, n, base=module)
    _certify(seq)
    _check_dual_exactness(seq)
    logger.info(f"[Origin] {module.name}, n={n}: P = R^{m}, Y dim {right.dim}")
    return seq


def _check_dual_exactness(seq: ShortExactSeq):
    """0 → Y* → (M⊕P)* → X* → 0 正合"""
    x_star = dual_module(seq.left)
    restriction = dual_morphism(seq.inj)
    sizes = (dual_module(seq.mid).dim, dual_module(seq.right).dim, x_star.dim)
    ok = restriction.rank() == x_star.dim and sizes[0] == sizes[1] + sizes[2]
    if not ok:
        logger.error(f"[Origin] dual sequence not exact: dims {sizes}, rank {restriction.rank()}")
        raise EngineCheckError("dualized origin extension is not exact", {"dims": sizes})


@dataclass
class MonoRepresentation:
    represented: bool
    witness: Morphism  # t : X → R^m


def represented_by_monomorphisms(mor: Morphism) -> MonoRepresentation:
    """f : X → M 是否存在 t : X → Q（Q 自由）使 (f,t)^T 单；取 t 为 X 的左自由逼近"""
    x_mod = mor.source
    f = mor.field
    if mor.is_injective():
        return MonoRepresentation(True, Morphism(x_mod, FreeModule(x_mod.ring, 0), f.zeros(0, x_mod.dim)))
    s, m = left_free_approximation(x_mod)
    t = Morphism(x_mod, FreeModule(x_mod.ring, m), s)
    return MonoRepresentation(f.rank(np.vstack([mor.mat, s])) == x_mod.dim, t)


# ---------- n-FPD 包络 ----------


def fpd_hull(
    module: Module, n: int, minimize: bool = True, rng: Optional[np.random.Generator] = None
) -> ShortExactSeq:
    """
    (W, f) 为极小 n-AB 逼近，s : W → R^m 为左自由逼近
    Y = coker((f, -s)^T)，X = coker s，0 → M → Y → X → 0 为推出
    """
    _require(membership(module, n), "H")
    ring = module.ring
    f = module.field
    ab = ab_approximation(module, n, minimize=True, rng=rng)
    w_mod, p = ab.mid, ab.surj
    if not evaluation_map(w_mod).is_injective():
        logger.error(f"[Hull] mid of the AB approximation of {module.name} is not torsionless (n={n})")
        raise EngineCheckError("torsionless-assertion-failure", {"module": module.name, "n": n})
    s, m = left_free_approximation(w_mod)
    free = FreeModule(ring, m)
    total, _, _ = direct_sum(module, free)
    push = Morphism(w_mod, total, np.vstack([p.mat, (-s) % f.p]))
    y_mod, y_proj = cokernel(push, f"Y({module.name})")
    x_mod, x_proj = cokernel(Morphism(w_mod, free, s), f"X({module.name})")
    inj = Morphism(module, y_mod, y_proj.mat[:, : module.dim])
    y_section = f.solve(y_proj.mat, f.eye(y_mod.dim))
    surj = Morphism(y_mod, x_mod, f.matmul(x_proj.mat, y_section[module.dim :]))
    seq = ShortExactSeq(module, y_mod, x_mod, inj, surj, SeqKind.HULL, n)
    if minimize:
        seq = minimize_hull(seq)
    _certify(seq)
    logger.info(f"[Hull] {module.name}, n={n}: mu(Y)={seq.mid.mu}, mu(X)={seq.right.mu}")
    return seq


def minimize_hull(seq: ShortExactSeq) -> ShortExactSeq:
    """X = X̄ ⊕ F 时以 Y' = q^{-1}(X̄) 代替 Y"""
    if seq.kind != SeqKind.HULL:
        raise PreconditionError("minimize_hull expects an FPD hull")
    split = free_summand_split(seq.right)
    if split.free_rank == 0:
        return seq
    f = seq.mid.field
    to_free = f.matmul(split.free_projection.mat, seq.surj.mat)
    y_sub, inc = submodule(seq.mid, f.kernel_basis(to_free), seq.mid.name)
    inj_mat = f.solve(inc.mat, seq.inj.mat)
    if inj_mat is None:
        raise EngineCheckError("M does not land in the preimage of the stable part")
    sd = split.stable.dim
    surj_mat = f.matmul(split.forward.mat[:sd], seq.surj.mat, inc.mat)
    logger.debug(f"[Hull] minimization removed free rank {split.free_rank}")
    return ShortExactSeq(
        seq.left,
        y_sub,
        split.stable,
        Morphism(seq.left, y_sub, inj_mat),
        Morphism(y_sub, split.stable, surj_mat),
        SeqKind.HULL,
        seq.n,
    )


# ---------- 见证映射 ----------


@dataclass
class WitnessResult:
    xi: int
    morphism: Optional[Morphism]  # f : M → Z
    tensor_rank: int

    @property
    def is_none_certificate(self) -> bool:
        return self.morphism is None

    def to_dict(self) -> dict:
        data = {"xi": self.xi, "certificate": "none" if self.morphism is None else "witness"}
        if self.morphism is not None:
            data["target_dim"] = self.morphism.target.dim
            data["target_mu"] = self.morphism.target.mu
            data["tensor_rank"] = self.tensor_rank
        return data


def witness_map(module: Module, n: int, rng: Optional[np.random.Generator] = None) -> WitnessResult:
    """
    ξ(n,M) > 0 时给出 f : M → Z（pd Z ≤ n）使 f ⊗ k ≠ 0，Z = coker((p_M, s)^T)
    ξ(n,M) = 0 时返回 none 证书
    """
    from invariants.xi import xi_n

    _require(membership(module, n), "E")
    xi = xi_n(module, n)
    if xi == 0:
        return WitnessResult(0, None, 0)
    f = module.field
    ab = ab_approximation(module, n, minimize=True, rng=rng)
    w_mod, p = ab.mid, ab.surj
    s, m = left_free_approximation(w_mod)
    total, _, _ = direct_sum(module, FreeModule(module.ring, m))
    z_mod, z_proj = cokernel(Morphism(w_mod, total, np.vstack([p.mat, s])), f"Z({module.name})")
    mor = Morphism(module, z_mod, z_proj.mat[:, : module.dim])
    rank = mor.tensor_k_rank()
    if rank == 0 or not pd_at_most(z_mod, n):
        logger.error(f"[Witness] witness map for {module.name} (n={n}) is degenerate")
        raise EngineCheckError("witness map is zero mod m or lands outside finite projective dimension")
    return WitnessResult(xi, mor, rank)


def lifts_through(seq: ShortExactSeq, mor: Morphism) -> Optional[Morphism]:
    """g : X' → M 是否经 surj 提升；返回 h : X' → mid 使 surj∘h = g"""
    f = seq.mid.field
    hom = hom_basis(mor.source, seq.mid)
    if hom.dim == 0:
        return mor.source.zero_map_to(seq.mid) if mor.is_zero() else None
    pushed = np.einsum("xa,hay->hxy", seq.surj.mat, hom.mats) % f.p
    c = f.solve(pushed.reshape(hom.dim, seq.mid.dim * mor.source.dim).T, mor.mat.reshape(-1))
    if c is None:
        return None
    return hom.combine(c)
