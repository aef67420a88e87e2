# encoding:utf-8
"""
对象层面的函子与手术：Auslander 转置 Tr、R-对偶、自由直和项分裂、同构判定
"""

import itertools
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from common.errors import EngineCheckError, RingMismatchError
from common.logger import logger
from config import get_config
from homology.hom import dual_module, evaluation_map, hom_basis, ring_dual_hom
from rmod.module import FreeModule, Module, Morphism, direct_sum, from_presentation, submodule
from rmod.resolution import minimal_presentation


def transpose(module: Module) -> Module:
    """Tr M = coker(d_1^T)，d_1 为极小表示"""

    def build():
        pres = minimal_presentation(module)
        return from_presentation(pres.transpose(), f"Tr({module.name})")

    return module.cached("transpose", build)


@dataclass
class DualResult:
    module: Module
    evaluation: Morphism
    torsionless: bool
    reflexive: bool


def dual(module: Module) -> DualResult:
    """M* 与 φ_M : M → M**"""
    star = dual_module(module)
    phi = evaluation_map(module)
    injective = phi.is_injective()
    return DualResult(star, phi, injective, injective and phi.is_surjective())


def free_rank(module: Module) -> int:
    """最大自由直和项的秩 = {ε∘φ : φ ∈ M*} 的维数"""
    if module.dim == 0:
        return 0
    hom = ring_dual_hom(module)
    if hom.dim == 0:
        return 0
    return module.field.rank(hom.mats[:, 0, :])


@dataclass
class SplitResult:
    """M ≅ M' ⊕ R^a 及显式互逆同构"""

    stable: Module
    free_rank: int
    total: Module  # M' ⊕ R^a
    forward: Morphism  # M → M' ⊕ R^a
    backward: Morphism  # M' ⊕ R^a → M
    inclusion: Morphism  # M' ↪ M
    free_inclusion: Morphism  # R^a → M
    free_projection: Morphism  # M → R^a


def free_summand_split(module: Module) -> SplitResult:
    """
    取 φ_1..φ_a ∈ M* 与 x_1..x_a ∈ M 使 ε(φ_i(x_j)) = δ_ij
    Φ = (φ_i) : M → R^a 被 u = s·(Φs)^{-1} 截断，M' = ker Φ
    """
    f = module.field
    ring = module.ring
    d = ring.dim
    dm = module.dim
    hom = ring_dual_hom(module)
    eps = hom.mats[:, 0, :] if hom.dim else f.zeros(0, dm)
    rows = f.independent_columns(eps.T) if eps.shape[0] else []
    a = len(rows)
    free = FreeModule(ring, a)
    if a == 0:
        total, inj, proj = direct_sum(module, free)
        ident = f.eye(dm)
        return SplitResult(
            module,
            0,
            total,
            Morphism(module, total, ident),
            Morphism(total, module, ident),
            module.identity(),
            Morphism(free, module, f.zeros(dm, 0)),
            Morphism(module, free, f.zeros(0, dm)),
        )
    sel = eps[rows]
    x = f.solve(sel, f.eye(a))
    phi = hom.mats[rows].reshape(a * d, dm)
    s = np.einsum("bxc,cj->xjb", module.actions, x).reshape(dm, a * d) % f.p
    u = f.matmul(s, f.inverse(f.matmul(phi, s)))
    k = f.column_space(f.kernel_basis(phi))
    stable, inc = submodule(module, k, f"{module.name}'" if module.name else "", reduce_basis=False)
    total, _, _ = direct_sum(stable, free)
    linv = f.left_inverse(k)
    proj_stable = f.matmul(linv, (f.eye(dm) - f.matmul(u, phi)) % f.p)
    forward = Morphism(module, total, np.vstack([proj_stable, phi]))
    backward = Morphism(total, module, np.hstack([k, u]))
    if free_rank(stable) != 0:
        raise EngineCheckError("stable part of a free summand split still has a free summand")
    logger.debug(f"[Split] {module.name}: free rank {a}, stable dim {stable.dim}")
    return SplitResult(
        stable, a, total, forward, backward, inc, Morphism(free, module, u), Morphism(module, free, phi)
    )


def loewy_dims(module: Module) -> List[int]:
    """dim m^t M，t = 0, 1, ... 直到 0"""

    def build():
        f = module.field
        v = f.eye(module.dim)
        dims = [module.dim]
        while v.shape[1]:
            acts = module.gen_actions()
            if not acts:
                break
            v = f.column_space(np.hstack([f.matmul(a, v) for a in acts]))
            dims.append(int(v.shape[1]))
        return dims

    return module.cached("loewy_dims", build)


@dataclass
class IsoResult:
    isomorphic: bool
    witness: Optional[Morphism]
    reason: str

    def __bool__(self):
        return self.isomorphic


def is_isomorphic(m: Module, n: Module, rng: Optional[np.random.Generator] = None) -> IsoResult:
    """
    先比较 dim、μ 与 dim m^t M，再在 Hom(M,N) 中随机（小规模时穷举）寻找可逆元素
    搜索失败时报告 "not proven isomorphic"
    """
    if m.ring is not n.ring:
        raise RingMismatchError("isomorphism test across rings")
    f = m.field
    if m.dim != n.dim:
        return IsoResult(False, None, f"dimension {m.dim} != {n.dim}")
    if m.dim == 0:
        return IsoResult(True, Morphism(m, n, f.zeros(0, 0)), "zero modules")
    if m.mu != n.mu:
        return IsoResult(False, None, f"mu {m.mu} != {n.mu}")
    if loewy_dims(m) != loewy_dims(n):
        return IsoResult(False, None, f"loewy dims {loewy_dims(m)} != {loewy_dims(n)}")
    hom = hom_basis(m, n)
    if hom.dim == 0:
        return IsoResult(False, None, "Hom(M,N) = 0")
    config = get_config()
    if rng is None:
        rng = np.random.default_rng(int(config.get("seed", 0)))
    for _ in range(int(config.get("iso_samples", 64))):
        cand = hom.random_element(rng)
        if cand.is_isomorphism():
            return IsoResult(True, cand, "random search")
    if f.p ** hom.dim <= int(config.get("iso_exhaustive_limit", 4096)):
        for coeffs in itertools.product(range(f.p), repeat=hom.dim):
            cand = hom.combine(np.array(coeffs, dtype=np.int64))
            if cand.is_isomorphism():
                return IsoResult(True, cand, "exhaustive search")
        return IsoResult(False, None, "exhaustive search found no isomorphism")
    return IsoResult(False, None, "not proven isomorphic")
