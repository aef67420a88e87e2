# encoding:utf-8
"""
Hom 空间、经投射模分解的子空间 P(M,N) 与稳定 Hom
"""

from typing import List, Optional

import numpy as np

from common.errors import BudgetExceededError, RingMismatchError
from common.logger import logger
from config import get_config
from rmod.module import FreeModule, Module, Morphism


def _count_matrices(arr: np.ndarray, rows: int, cols: int) -> int:
    """... × rows × cols 数组中矩阵的个数"""
    if arr.ndim >= 2 and arr.shape[-2:] == (rows, cols):
        return int(np.prod(arr.shape[:-2], dtype=np.int64))
    return arr.size // (rows * cols) if rows * cols else 0


class HomSpace:
    """Hom_R(M, N) 的一组基，basis_mats 形状为 h × D_N × D_M"""

    def __init__(self, source: Module, target: Module, basis_mats: np.ndarray):
        self.source = source
        self.target = target
        self.field = source.field
        b = self.field.reduce(basis_mats)
        b = b.reshape(_count_matrices(b, target.dim, source.dim), target.dim, source.dim)
        b.setflags(write=False)
        self.mats = b
        self.dim = int(b.shape[0])
        self._flat: Optional[np.ndarray] = None

    @property
    def basis(self) -> List[Morphism]:
        return [Morphism(self.source, self.target, m) for m in self.mats]

    @property
    def flat(self) -> np.ndarray:
        """(D_N·D_M) × h，每列为一个基元素按行展平"""
        if self._flat is None:
            self._flat = self.mats.reshape(self.dim, self.target.dim * self.source.dim).T.copy()
        return self._flat

    def combine(self, coeffs) -> Morphism:
        c = self.field.reduce(coeffs).reshape(-1)
        mat = np.einsum("h,hxy->xy", c, self.mats) % self.field.p if self.dim else self.field.zeros(
            self.target.dim, self.source.dim
        )
        return Morphism(self.source, self.target, mat)

    def coords(self, mats) -> np.ndarray:
        """若干矩阵（... × D_N × D_M）在基下的坐标，按列返回 h × n"""
        m = self.field.reduce(mats)
        m = m.reshape(_count_matrices(m, self.target.dim, self.source.dim), self.target.dim * self.source.dim).T
        x = self.field.solve(self.flat, m)
        if x is None:
            raise ValueError("matrix is not a homomorphism")
        return x

    def random_element(self, rng: np.random.Generator) -> Morphism:
        return self.combine(rng.integers(0, self.field.p, size=self.dim))

    def __repr__(self):
        return f"Hom({self.source.name}, {self.target.name}) dim={self.dim}"


def hom_basis(source: Module, target: Module) -> HomSpace:
    """
    Hom(M, N) 经 M 的极小表示计算：
    {(n_1..n_β0) ∈ N^{β0} : Σ_j a_jl n_j = 0}，再由 π_0 的右逆转成矩阵
    """
    if source.ring is not target.ring:
        raise RingMismatchError("Hom between modules over different rings")
    f = source.field
    dm, dn = source.dim, target.dim
    if dm == 0 or dn == 0:
        return HomSpace(source, target, np.zeros((0, dn, dm), dtype=np.int64))
    ring = source.ring
    d = ring.dim
    res = source.resolution()
    b0 = res.betti(0)
    pres = res.differential(1)
    b1 = pres.cols
    if b1:
        c = np.einsum("jlb,bxy->lxjy", pres.entries, target.actions).reshape(b1 * dn, b0 * dn) % f.p
        u = f.kernel_basis(c)
    else:
        u = f.eye(b0 * dn)
    h = u.shape[1]
    n_all = u.T.reshape(h, b0, dn)
    images = np.einsum("bxy,hjy->hxjb", target.actions, n_all).reshape(h, dn, b0 * d) % f.p
    section = _cover_section(source)
    mats = np.einsum("hxa,ay->hxy", images, section) % f.p
    logger.debug(f"[Hom] Hom({source.name}, {target.name}) dim={h}")
    return HomSpace(source, target, mats)


def _cover_section(module: Module) -> np.ndarray:
    """π_0 的右逆 S：π_0·S = I"""

    def build():
        f = module.field
        s = f.solve(module.resolution().cover_matrix(), f.eye(module.dim))
        if s is None:
            raise ValueError("free cover is not surjective")
        return s

    return module.cached("cover_section", build)


def ring_dual_hom(module: Module) -> HomSpace:
    """Hom(M, R) 的基（缓存）"""
    return module.cached("dual_hom", lambda: hom_basis(module, FreeModule(module.ring, 1)))


# ---------- 经投射模分解的映射 ----------


def projective_factoring(source: Module, target: Module) -> np.ndarray:
    """
    P(M,N)：经 N 的自由覆盖分解的映射全体
    由 {x ↦ φ(x)·y_j : φ ∈ Hom(M,R) 的基, y_j 为 N 的覆盖生成元} 张成
    :return: 展平后的规范列基 (D_N·D_M) × r
    """
    f = source.field
    dm, dn = source.dim, target.dim
    if dm == 0 or dn == 0:
        return f.zeros(dn * dm, 0)
    d = source.ring.dim
    dual = ring_dual_hom(source)
    cover = target.resolution().cover_matrix()
    b0 = cover.shape[1] // d
    count = dual.dim * b0
    budget = int(get_config().get("entry_budget", 60_000_000))
    if count * dn * dm > budget:
        raise BudgetExceededError(0, count * dn * dm, budget, what="projective factoring")
    if count == 0:
        return f.zeros(dn * dm, 0)
    y = cover.reshape(dn, b0, d)
    prods = np.einsum("xjb,hby->hjxy", y, dual.mats) % f.p
    return f.column_space(prods.reshape(count, dn * dm).T)


def is_stably_zero(mor: Morphism) -> bool:
    """f 是否经投射模分解"""
    if mor.is_zero():
        return True
    pf = projective_factoring(mor.source, mor.target)
    return mor.field.contains(pf, mor.mat.reshape(-1))


def factor_through_cover(mor: Morphism) -> Optional[Morphism]:
    """若 f ∈ P(M,N)，返回 h : M → F_N 使 π_N∘h = f；否则返回 None"""
    source, target = mor.source, mor.target
    f = source.field
    d = source.ring.dim
    cover = target.resolution().cover_matrix()
    b0 = cover.shape[1] // d
    free = FreeModule(source.ring, b0)
    if source.dim == 0 or target.dim == 0:
        return Morphism(source, free, f.zeros(free.dim, source.dim)) if mor.is_zero() else None
    dual = ring_dual_hom(source)
    y = cover.reshape(target.dim, b0, d)
    prods = np.einsum("xjb,hby->hjxy", y, dual.mats) % f.p
    gens = prods.reshape(dual.dim * b0, target.dim * source.dim).T
    c = f.solve(gens, mor.mat.reshape(-1)) if gens.shape[1] else None
    if c is None:
        return None
    c = c.reshape(dual.dim, b0)
    # h 的第 j 个分量为 Σ_t c[t, j] Φ_t
    blocks = np.einsum("hj,hby->jby", c, dual.mats) % f.p
    return Morphism(source, free, blocks.reshape(b0 * d, source.dim))


class StableHomSpace:
    """稳定 Hom：Hom(M,N) / P(M,N)"""

    def __init__(self, hom: HomSpace, projective: np.ndarray):
        self.hom = hom
        self.field = hom.field
        self.projective_factoring = projective
        f = self.field
        p_dim = projective.shape[1]
        chosen = f.independent_columns(np.hstack([projective, hom.flat]), start=p_dim)
        self.quotient_indices = [c - p_dim for c in chosen]
        self.dim = len(self.quotient_indices)

    @property
    def quotient_basis(self) -> List[Morphism]:
        return [Morphism(self.hom.source, self.hom.target, self.hom.mats[i]) for i in self.quotient_indices]

    def class_of(self, mor: Morphism) -> np.ndarray:
        """f 的稳定类在商基下的坐标"""
        f = self.field
        q = self.hom.flat[:, self.quotient_indices]
        x = f.solve(np.hstack([q, self.projective_factoring]), mor.mat.reshape(-1))
        if x is None:
            raise ValueError("map is not a homomorphism between these modules")
        return x[: self.dim]

    def projection(self) -> np.ndarray:
        """Hom 基 → 稳定 Hom 商基 的坐标矩阵（dim × hom.dim）"""
        cols = [self.class_of(m) for m in self.hom.basis]
        return np.stack(cols, axis=1) if cols else self.field.zeros(self.dim, 0)

    def is_zero_class(self, mor: Morphism) -> bool:
        return self.field.contains(self.projective_factoring, mor.mat.reshape(-1))

    def __repr__(self):
        return f"StableHom({self.hom.source.name}, {self.hom.target.name}) dim={self.dim}"


def stable_hom(source: Module, target: Module) -> StableHomSpace:
    return StableHomSpace(hom_basis(source, target), projective_factoring(source, target))


# ---------- R-对偶 ----------


def dual_module(module: Module) -> Module:
    """M* = Hom(M,R)，坐标取 ring_dual_hom 的基，(r·φ)(x) = r·φ(x)"""

    def build():
        hom = ring_dual_hom(module)
        f = module.field
        ring = module.ring
        h = hom.dim
        if h == 0:
            return Module(ring, np.zeros((ring.dim, 0, 0), dtype=np.int64), f"({module.name})*")
        moved = np.einsum("bac,hcy->bhay", ring.mult, hom.mats) % f.p
        coords = hom.coords(moved.reshape(ring.dim * h, ring.dim, module.dim))
        acts = coords.reshape(h, ring.dim, h).transpose(1, 0, 2)
        return Module(ring, acts, f"({module.name})*")

    return module.cached("dual_module", build)


def dual_morphism(mor: Morphism) -> Morphism:
    """f : M → N 的对偶 f* : N* → M*，g ↦ g∘f"""
    f = mor.field
    src_star = dual_module(mor.target)
    tgt_star = dual_module(mor.source)
    nh = ring_dual_hom(mor.target)
    mh = ring_dual_hom(mor.source)
    if nh.dim == 0 or mh.dim == 0:
        return Morphism(src_star, tgt_star, f.zeros(tgt_star.dim, src_star.dim))
    composed = np.einsum("hay,yx->hax", nh.mats, mor.mat) % f.p
    return Morphism(src_star, tgt_star, mh.coords(composed))


def evaluation_map(module: Module) -> Morphism:
    """φ_M : M → M**，φ_M(x)(f) = f(x)"""

    def build():
        f = module.field
        star = dual_module(module)
        bidual = dual_module(star)
        hom = ring_dual_hom(module)
        if bidual.dim == 0 or module.dim == 0:
            return Morphism(module, bidual, f.zeros(bidual.dim, module.dim))
        # 对每个坐标 c，泛函 t ↦ Φ_t[:, c] 为 d × h 矩阵
        funcs = hom.mats.transpose(2, 1, 0)
        return Morphism(module, bidual, ring_dual_hom(star).coords(funcs))

    return module.cached("evaluation", build)
