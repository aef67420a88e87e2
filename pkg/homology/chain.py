# encoding:utf-8
"""
沿极小自由分解提升同态，以及合冲函子 Ω^n 在同态上的作用
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from common.errors import EngineCheckError
from common.logger import logger
from ring.algebra import Algebra
from rmod.module import Morphism, PresentationMatrix


@dataclass
class ChainLift:
    """f̃_i : R^{β_i(M)} → R^{β_i(N)}，maps[i] 为 β_i(N)×β_i(M) 矩阵"""

    morphism: Morphism
    maps: List[PresentationMatrix] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return len(self.maps) - 1


def differential_columns(pres: PresentationMatrix) -> np.ndarray:
    """d 的各列作为 k-坐标向量，(rows·d) × cols"""
    d = pres.ring.dim
    return pres.entries.transpose(0, 2, 1).reshape(pres.rows * d, pres.cols)


def lift_generators(
    ring: Algebra,
    target: np.ndarray,
    images: np.ndarray,
    rows: int,
    rng: Optional[np.random.Generator] = None,
) -> PresentationMatrix:
    """
    求 R^{m} → R^{rows} 使各生成元的像满足 target·x = images[:, j]
    :param target: 自由模 R^{rows} 到某空间的 k-矩阵
    :param rng: 给定时在解上叠加随机的核元素，得到另一个提升
    """
    f = ring.field
    x = f.solve(target, images)
    if x is None:
        raise EngineCheckError("lift through a free cover does not exist")
    if rng is not None and x.shape[1]:
        k = f.kernel_basis(target)
        if k.shape[1]:
            x = (x + k @ f.random_matrix(rng, k.shape[1], x.shape[1])) % f.p
    return PresentationMatrix.from_columns(ring, rows, x)


def lift_morphism(mor: Morphism, degree: int, rng: Optional[np.random.Generator] = None) -> ChainLift:
    """
    把 f : M → N 提升为链映射 f̃_0..f̃_degree
    f̃_0 由 π_N∘f̃_0 = f∘π_M 决定，f̃_i 由 d^N_i∘f̃_i = f̃_{i-1}∘d^M_i 决定
    """
    ring = mor.source.ring
    f = mor.field
    d = ring.dim
    res_m = mor.source.resolution()
    res_n = mor.target.resolution()
    lift = ChainLift(mor)
    if degree < 0:
        return lift
    images = f.matmul(mor.mat, res_m.cover_matrix()[:, ::d]) if mor.source.dim else f.zeros(mor.target.dim, 0)
    lift.maps.append(lift_generators(ring, res_n.cover_matrix(), images, res_n.betti(0), rng))
    for i in range(1, degree + 1):
        dm = res_m.differential(i)
        dn = res_n.differential(i)
        images = f.matmul(lift.maps[i - 1].expand(), differential_columns(dm))
        lift.maps.append(lift_generators(ring, dn.expand(), images, res_n.betti(i), rng))
    logger.debug(f"[Chain] lifted {mor} to degree {degree}")
    return lift


def syzygy_morphism(mor: Morphism, n: int, rng: Optional[np.random.Generator] = None) -> Morphism:
    """Ω^n f : Ω^n M → Ω^n N，为第 n-1 层提升在核上的限制"""
    if n < 0:
        raise ValueError("syzygy degree must be nonnegative")
    if n == 0:
        return mor
    f = mor.field
    res_m = mor.source.resolution()
    res_n = mor.target.resolution()
    src = res_m.syzygy(n)
    tgt = res_n.syzygy(n)
    lift = lift_morphism(mor, n - 1, rng)
    km = res_m.kernel(n)
    kn = res_n.kernel(n)
    moved = f.matmul(lift.maps[n - 1].expand(), km) if km.shape[1] else f.zeros(kn.shape[0], 0)
    x = f.solve(kn, moved) if kn.shape[1] else (f.zeros(0, km.shape[1]) if not np.any(moved) else None)
    if x is None:
        raise EngineCheckError("chain lift does not restrict to syzygies")
    return Morphism(src, tgt, x)
