# encoding:utf-8
"""
Ext、grade、n-torsionfree 与 Auslander 正合列检验
Ext^i(M,N) 取 Hom(F_•(M), N) 的上同调，F_• 为极小自由分解
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from common.errors import EngineCheckError
from common.logger import logger
from homology.hom import evaluation_map
from rmod.module import FreeModule, Module, Morphism, quotient, submodule


@dataclass
class ExtReport:
    i: int
    dim: int
    cocycles: Optional[np.ndarray] = None

    def to_dict(self) -> dict:
        return {"i": self.i, "dim": self.dim}


def cochain_differential(source: Module, target: Module, i: int) -> np.ndarray:
    """
    δ_i : N^{β_{i-1}} → N^{β_i}，(δ_i n)_l = Σ_j a_jl·n_j，其中 (a_jl) = d_i
    i = 0 时为 0 → N^{β_0}
    """
    f = source.field
    res = source.resolution()
    dn = target.dim
    if i == 0:
        return f.zeros(res.betti(0) * dn, 0)
    pres = res.differential(i)
    return (
        np.einsum("jlb,bxy->lxjy", pres.entries, target.actions).reshape(pres.cols * dn, pres.rows * dn)
        % f.p
    )


def ext(source: Module, target: Module, i: int, with_cocycles: bool = False) -> ExtReport:
    """dim Ext^i(M,N) = β_i·D_N − rank δ_{i+1} − rank δ_i"""
    if i < 0:
        raise ValueError("Ext degree must be nonnegative")
    f = source.field
    if source.dim == 0 or target.dim == 0:
        return ExtReport(i, 0, f.zeros(0, 0) if with_cocycles else None)
    res = source.resolution()
    res.extend(i + 1)
    nxt = cochain_differential(source, target, i + 1)
    cur = cochain_differential(source, target, i)
    size = res.betti(i) * target.dim
    dim = size - f.rank(nxt) - f.rank(cur)
    cocycles = None
    if with_cocycles:
        z = f.kernel_basis(nxt) if nxt.shape[0] else f.eye(size)
        b = f.column_space(cur)
        chosen = f.independent_columns(np.hstack([b, z]), start=b.shape[1])
        cocycles = z[:, [c - b.shape[1] for c in chosen]]
    logger.debug(f"[Ext] Ext^{i}({source.name}, {target.name}) = {dim}")
    return ExtReport(i, int(dim), cocycles)


def ext_ring(module: Module, i: int) -> ExtReport:
    """Ext^i(M, R)（按模缓存）"""
    return module.cached(f"ext_ring:{i}", lambda: ext(module, FreeModule(module.ring, 1), i))


def ext_module(module: Module, i: int) -> Module:
    """Ext^i(M,R) 作为 R-模：对偶复形 R^{β_{i-1}} → R^{β_i} → R^{β_{i+1}} 的子商"""
    ring = module.ring
    f = module.field
    res = module.resolution()
    res.extend(i + 1)
    free = FreeModule(ring, res.betti(i))
    if free.dim == 0:
        return Module(ring, np.zeros((ring.dim, 0, 0), dtype=np.int64), f"Ext^{i}")
    nxt = res.differential(i + 1).transpose().expand() if res.betti(i + 1) else f.zeros(0, free.dim)
    z = f.kernel_basis(nxt) if nxt.shape[0] else f.eye(free.dim)
    cyc, inc = submodule(free, z, f"Z^{i}")
    if i == 0 or res.betti(i - 1) == 0:
        return quotient(cyc, f.zeros(cyc.dim, 0), f"Ext^{i}({module.name},R)")[0]
    bnd = res.differential(i).transpose().expand()
    coords = f.solve(inc.mat, bnd)
    if coords is None:
        raise EngineCheckError("coboundaries are not cocycles")
    return quotient(cyc, coords, f"Ext^{i}({module.name},R)")[0]


def ext_map_kernel_dim(source: Module, mor: Morphism, i: int) -> int:
    """dim ker(Ext^i(X, g) : Ext^i(X,N) → Ext^i(X,N'))，g : N → N'"""
    f = source.field
    n, n2 = mor.source, mor.target
    if source.dim == 0 or n.dim == 0:
        return 0
    res = source.resolution()
    res.extend(i + 1)
    beta = res.betti(i)
    nxt = cochain_differential(source, n, i + 1)
    z = f.kernel_basis(nxt) if nxt.shape[0] else f.eye(beta * n.dim)
    b_n = f.column_space(cochain_differential(source, n, i))
    b_n2 = f.column_space(cochain_differential(source, n2, i))
    g = np.kron(np.eye(beta, dtype=np.int64), mor.mat)
    moved = f.matmul(g, z)
    k = f.kernel_basis(np.hstack([moved, (-b_n2) % f.p]))
    w = f.column_space(k[: z.shape[1]])
    return int(w.shape[1] - b_n.shape[1])


@dataclass
class GradeResult:
    """grade = value；value 为 None 表示 grade ≥ cutoff"""

    value: Optional[int]
    cutoff: int

    def __str__(self):
        return str(self.value) if self.value is not None else f">= {self.cutoff}"


def grade(module: Module, cutoff: int) -> GradeResult:
    """
    只检查 0 ≤ i < cutoff：返回最小的 i 使 Ext^i(M,R) ≠ 0，都为零时报告 grade ≥ cutoff
    cutoff = 0 时不做任何计算
    """
    for i in range(cutoff):
        if ext_ring(module, i).dim > 0:
            return GradeResult(i, cutoff)
    return GradeResult(None, cutoff)


def first_nonvanishing_ext(module: Module, lo: int, hi: int) -> Optional[int]:
    """[lo, hi] 中第一个使 Ext^i(M,R) ≠ 0 的 i"""
    for i in range(lo, hi + 1):
        if ext_ring(module, i).dim > 0:
            return i
    return None


def grade_condition(module: Module, n: int, literal: bool = False) -> bool:
    """
    第 n 个 grade 条件：grade Ext^i(M,R) ≥ i, 1 ≤ i ≤ n
    artin 环上非零模的 grade 为 0，故等价于 Ext^i(M,R) = 0；literal 时按定义计算
    """
    if not literal:
        return first_nonvanishing_ext(module, 1, n) is None
    for i in range(1, n + 1):
        e = ext_module(module, i)
        if e.dim and grade(e, i).value is not None:
            return False
    return True


def n_torsionfree(module: Module, n: int) -> bool:
    """Ext^i(Tr M, R) = 0, 1 ≤ i ≤ n"""
    return torsionfree_failure(module, n) is None


def torsionfree_failure(module: Module, n: int) -> Optional[int]:
    """第一个使 Ext^i(Tr M, R) ≠ 0 的 i ≤ n"""
    from rmod.functors import transpose

    if n <= 0:
        return None
    return first_nonvanishing_ext(transpose(module), 1, n)


@dataclass
class AuslanderReport:
    ker_phi: int
    ext1: int
    coker_phi: int
    ext2: int

    @property
    def ok(self) -> bool:
        return self.ker_phi == self.ext1 and self.coker_phi == self.ext2

    def to_dict(self) -> dict:
        return {
            "ker_phi": self.ker_phi,
            "ext1_tr": self.ext1,
            "coker_phi": self.coker_phi,
            "ext2_tr": self.ext2,
            "ok": self.ok,
        }


def auslander_sequence_check(module: Module) -> AuslanderReport:
    """0 → Ext^1(Tr M,R) → M → M** → Ext^2(Tr M,R) → 0 的维数检验"""
    from rmod.functors import transpose

    phi = evaluation_map(module)
    rk = phi.rank()
    tr = transpose(module)
    report = AuslanderReport(
        module.dim - rk, ext_ring(tr, 1).dim, phi.target.dim - rk, ext_ring(tr, 2).dim
    )
    if not report.ok:
        logger.error(f"[Ext] Auslander sequence check failed for {module.name}: {report.to_dict()}")
        raise EngineCheckError("Auslander sequence dimensions disagree", report.to_dict())
    return report
