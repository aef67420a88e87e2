# encoding:utf-8
"""
伴随对 (TrΩⁿTr, Ωⁿ) 的余单位 ψⁿ_M : TrΩⁿTrΩⁿM → M 的显式构造

步骤：
1. M 的极小分解 P_{n+1} → ... → P_0 → M
2. T = TrΩⁿM = coker(d_{n+1}^T : P_n* → P_{n+1}*)，取其极小分解 Q_•
3. 对偶复形 C_j = P_{n+1-j}*（∂^C_j = d_{n+2-j}^T）到 Q_• 提升 T 的恒等，得 λ_0..λ_{n+1}
4. X = coker((∂^Q_{n+1})^T)，ψ = π^M_0 ∘ λ_{n+1}^T，在 Q_n* 的像上为 0
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from common.errors import EngineCheckError
from common.logger import logger
from homology.chain import differential_columns, lift_generators
from rmod.module import Module, Morphism, PresentationMatrix, cokernel_of_presentation, zero_module


@dataclass
class CounitData:
    """ψ 及构造过程中的中间对象"""

    psi: Morphism
    transpose_syzygy: Module  # T = TrΩⁿM
    lifts: List[PresentationMatrix]  # λ_0..λ_{n+1}


def counit_data(module: Module, n: int, rng: Optional[np.random.Generator] = None) -> CounitData:
    if n < 0:
        raise ValueError("counit degree must be nonnegative")
    ring = module.ring
    f = module.field
    d = ring.dim
    name = f"TrΩ^{n}TrΩ^{n}({module.name})"
    res = module.resolution()
    res.extend(n + 1)
    if module.dim == 0 or res.betti(n + 1) == 0:
        # pd M ≤ n：T = 0，X = 0
        z = zero_module(ring)
        psi = Morphism(Module(ring, z.actions, name), module, f.zeros(module.dim, 0))
        return CounitData(psi, z, [])

    t_mod, q_t = cokernel_of_presentation(res.differential(n + 1).transpose(), f"TrΩ^{n}({module.name})")
    res_t = t_mod.resolution()
    res_t.extend(n + 1)

    lifts = [lift_generators(ring, res_t.cover_matrix(), q_t[:, ::d], res_t.betti(0), rng)]
    for j in range(1, n + 2):
        boundary = res.differential(n + 2 - j).transpose()
        images = f.matmul(lifts[j - 1].expand(), differential_columns(boundary))
        lifts.append(lift_generators(ring, res_t.differential(j).expand(), images, res_t.betti(j), rng))

    top = res_t.differential(n + 1).transpose()
    x_mod, q_x = cokernel_of_presentation(top, name)
    s_x = f.solve(q_x, f.eye(x_mod.dim))
    back = lifts[n + 1].transpose().expand()
    cover = res.cover_matrix()
    if top.cols and np.any(f.matmul(cover, back, top.expand())):
        logger.error(f"[Counit] psi^{n} of {module.name} does not kill the relations")
        raise EngineCheckError("counit does not factor through the cokernel")
    psi = Morphism(x_mod, module, f.matmul(cover, back, s_x))
    logger.debug(f"[Counit] psi^{n}({module.name}): {x_mod.dim} -> {module.dim}, rank {psi.rank()}")
    return CounitData(psi, t_mod, lifts)


def counit_psi(module: Module, n: int, rng: Optional[np.random.Generator] = None) -> Morphism:
    """ψⁿ_M；不带 rng 时按模缓存，构造是确定的"""
    if rng is not None:
        return counit_data(module, n, rng).psi
    return module.cached(f"counit:{n}", lambda: counit_data(module, n).psi)
