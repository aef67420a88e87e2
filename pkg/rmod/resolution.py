# encoding:utf-8
"""
极小自由分解、自由覆盖、合冲与极小表示
"""

import threading
from typing import List, Optional

import numpy as np

from common.errors import BudgetExceededError, EngineCheckError
from common.logger import logger
from config import get_config
from rmod.module import FreeModule, Module, Morphism, PresentationMatrix, submodule


def multiply_blocks(ring, vectors: np.ndarray, k: int) -> np.ndarray:
    """对 R^r 中的若干 k-坐标列向量逐块乘以 b_k"""
    d = ring.dim
    n, m = vectors.shape
    blocks = vectors.reshape(n // d, d, m)
    return (np.einsum("ab,rbm->ram", ring.mult[k], blocks) % ring.p).reshape(n, m)


def minimal_submodule_generators(ring, basis: np.ndarray) -> np.ndarray:
    """
    自由模 R^r 的子模 span(basis) 的极小生成元
    从 basis 的列中按顺序选出模 m·span(basis) 线性无关者
    """
    f = ring.field
    if basis.shape[1] == 0:
        return basis
    products = [multiply_blocks(ring, basis, g) for g in ring.generators]
    m_part = f.column_space(np.hstack(products)) if products else f.zeros(basis.shape[0], 0)
    offset = m_part.shape[1]
    chosen = f.independent_columns(np.hstack([m_part, basis]), start=offset)
    return basis[:, [c - offset for c in chosen]]


class Resolution:
    """
    极小自由分解 ... → R^{β_2} →d_2 R^{β_1} →d_1 R^{β_0} →π M → 0
    K_i = ker(d_{i-1})（K_1 = ker π）以 R^{β_{i-1}} 中的规范列基保存
    可由父分解平移得到（合冲模的分解即原分解的尾部）
    """

    def __init__(self, module: Module, parent: Optional["Resolution"] = None, offset: int = 0, cover=None):
        self.module = module
        self.ring = module.ring
        self.field = module.field
        self._lock = threading.RLock()
        self._parent = parent
        self._offset = offset
        self._syzygies = {}
        if parent is not None:
            self._cover = self.field.reduce(cover)
            return
        gens = module.minimal_generators()
        d = self.ring.dim
        self._cover = (
            np.einsum("bxc,cj->xjb", module.actions, gens).reshape(module.dim, gens.shape[1] * d)
            % self.field.p
        )
        self._betti: List[int] = [int(gens.shape[1])]
        self._diffs: List[PresentationMatrix] = []
        self._kernels: List[np.ndarray] = [self._canonical_kernel(self._cover)]

    def _canonical_kernel(self, mat: np.ndarray) -> np.ndarray:
        return self.field.column_space(self.field.kernel_basis(mat))

    # ---------- 访问 ----------

    def cover_matrix(self) -> np.ndarray:
        """π_0 的 k-矩阵，D × β_0·d"""
        return self._cover

    def betti(self, i: int) -> int:
        if self._parent is not None:
            return self._parent.betti(self._offset + i)
        self.extend(i)
        return self._betti[i]

    def differential(self, i: int) -> PresentationMatrix:
        """d_i : R^{β_i} → R^{β_{i-1}}，i ≥ 1"""
        if i < 1:
            raise ValueError("differentials start at degree 1")
        if self._parent is not None:
            return self._parent.differential(self._offset + i)
        self.extend(i)
        return self._diffs[i - 1]

    def kernel(self, i: int) -> np.ndarray:
        """K_i = Ω^i M 在 R^{β_{i-1}} 中的基，i ≥ 1"""
        if self._parent is not None:
            return self._parent.kernel(self._offset + i)
        self.extend(i - 1)
        return self._kernels[i - 1]

    def betti_numbers(self, n: int) -> List[int]:
        return [self.betti(i) for i in range(n + 1)]

    def extend(self, degree: int):
        """把分解算到 R^{β_degree}"""
        if self._parent is not None:
            self._parent.extend(self._offset + degree)
            return
        with self._lock:
            budget = int(get_config().get("dim_budget", 20000))
            d = self.ring.dim
            while len(self._betti) <= degree:
                i = len(self._betti)
                k = self._kernels[i - 1]
                gens = minimal_submodule_generators(self.ring, k)
                beta = int(gens.shape[1])
                if beta * d > budget:
                    raise BudgetExceededError(i, beta * d, budget)
                diff = PresentationMatrix.from_columns(self.ring, self._betti[i - 1], gens)
                if not diff.is_minimal():
                    raise EngineCheckError(f"differential d_{i} has a unit entry")
                self._diffs.append(diff)
                self._betti.append(beta)
                self._kernels.append(self._canonical_kernel(diff.expand()) if beta else self.field.zeros(0, 0))
                logger.debug(
                    f"[Resolution] {self.module.name or '?'}: degree {i}, betti={beta}, "
                    f"syzygy dim={self._kernels[-1].shape[1]}"
                )

    # ---------- 合冲 ----------

    def syzygy(self, n: int) -> Module:
        """Ω^n M，n ≥ 1 时为 R^{β_{n-1}} 的子模，并带有平移后的分解"""
        if n == 0:
            return self.module
        with self._lock:
            if n in self._syzygies:
                return self._syzygies[n][0]
        k = self.kernel(n)
        free = FreeModule(self.ring, self.betti(n - 1))
        name = f"Ω^{n}({self.module.name})" if self.module.name else f"Ω^{n}"
        sub, inc = submodule(free, k, name=name, reduce_basis=False)
        linv = self.field.left_inverse(k)
        if self.betti(n):
            cover = self.field.matmul(linv, self.differential(n).expand())
        else:
            cover = self.field.zeros(sub.dim, 0)
        with sub._lock:
            sub._resolution = Resolution(sub, parent=self, offset=n, cover=cover)
        with self._lock:
            self._syzygies.setdefault(n, (sub, inc))
            return self._syzygies[n][0]

    def syzygy_inclusion(self, n: int) -> Morphism:
        """Ω^n M ↪ R^{β_{n-1}}，n ≥ 1"""
        self.syzygy(n)
        return self._syzygies[n][1]


def free_cover(module: Module) -> Morphism:
    """极小自由覆盖 π : R^{μ} ↠ M"""
    res = module.resolution()
    return Morphism(FreeModule(module.ring, res.betti(0)), module, res.cover_matrix())


def syzygy(module: Module, n: int) -> Module:
    if n < 0:
        raise ValueError("syzygy degree must be nonnegative")
    return module.resolution().syzygy(n)


def minimal_presentation(module: Module) -> PresentationMatrix:
    """R^{β_1} →d_1 R^{β_0} → M → 0，元素都在 m 中"""
    return module.resolution().differential(1)


def pd_at_most(module: Module, n: int) -> bool:
    """投射维数 ≤ n，按 Ω^{n+1} M = 0 判断（n < 0 时要求 M = 0）"""
    if n < 0:
        return module.dim == 0
    return module.resolution().betti(n + 1) == 0 if module.dim else True
