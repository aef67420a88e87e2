# encoding:utf-8
"""
V_n(M,N) = {f ∈ Hom(M,N) : Ωⁿf 稳定为零}，ξ(n,M) = dim V_n(M,k)
ξ 序列、极限证书、δ-不变量与指标
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from common.errors import EngineCheckError, NotGorensteinError, PreconditionError
from common.logger import logger
from config import get_config
from homology.chain import syzygy_morphism
from homology.ext import first_nonvanishing_ext
from homology.hom import HomSpace, hom_basis, projective_factoring
from ring.algebra import Algebra
from rmod.functors import free_rank, free_summand_split
from rmod.module import Module, Morphism, quotient_by_power, residue_field

METHODS = ("syzygy", "counit")


@dataclass
class VSubspace:
    """V_n(M,N)，coords 为在 hom 基下的列坐标（规范基）"""

    hom: HomSpace
    n: int
    coords: np.ndarray
    method: str = "syzygy"

    @property
    def dim(self) -> int:
        return int(self.coords.shape[1])

    @property
    def basis(self) -> List[Morphism]:
        return [self.hom.combine(self.coords[:, t]) for t in range(self.dim)]

    def contains(self, mor: Morphism) -> bool:
        f = self.hom.field
        flat = f.matmul(self.hom.flat, self.coords) if self.dim else f.zeros(self.hom.flat.shape[0], 0)
        return f.contains(flat, mor.mat.reshape(-1))

    def is_full(self) -> bool:
        return self.dim == self.hom.dim

    def __repr__(self):
        return f"V_{self.n}({self.hom.source.name}, {self.hom.target.name}) dim={self.dim}"


def _kernel_mod_projective(hom: HomSpace, images: np.ndarray, projective: np.ndarray) -> np.ndarray:
    """{c : Σ c_h images[:, h] ∈ span(projective)} 的规范基"""
    f = hom.field
    h = hom.dim
    if h == 0:
        return f.zeros(0, 0)
    k = f.kernel_basis(np.hstack([images, projective]))
    return f.column_space(k[:h])


def v_subspace(source: Module, target: Module, n: int, method: Optional[str] = None) -> VSubspace:
    """
    syzygy：对 Hom 的每个基元素取 Ωⁿ，模掉 P(ΩⁿM, ΩⁿN)
    counit：f ∈ V_n ⟺ f∘ψⁿ_M ∈ P(TrΩⁿTrΩⁿM, N)
    """
    if n < 0:
        raise ValueError("V_n needs n >= 0")
    method = method or get_config().get("xi_method", "syzygy")
    if method not in METHODS:
        raise ValueError(f"unknown V_n method {method!r}")
    f = source.field
    hom = hom_basis(source, target)
    if hom.dim == 0:
        return VSubspace(hom, n, f.zeros(0, 0), method)
    if method == "counit":
        from approx.counit import counit_psi

        psi = counit_psi(source, n)
        images = np.einsum("hxa,ay->hxy", hom.mats, psi.mat) % f.p
        images = images.reshape(hom.dim, target.dim * source.dim).T
        projective = projective_factoring(psi.source, target)
    else:
        maps = [syzygy_morphism(m, n) for m in hom.basis]
        omega_src, omega_tgt = maps[0].source, maps[0].target
        images = np.stack([m.mat.reshape(-1) for m in maps], axis=1)
        projective = projective_factoring(omega_src, omega_tgt)
    coords = _kernel_mod_projective(hom, images, projective)
    logger.debug(f"[Xi] V_{n}({source.name}, {target.name}) = {coords.shape[1]} of {hom.dim} ({method})")
    return VSubspace(hom, n, coords, method)


def xi_n(module: Module, n: int, method: Optional[str] = None) -> int:
    """ξ(n,M) = dim V_n(M,k)"""
    method = method or get_config().get("xi_method", "syzygy")
    return module.cached(
        f"xi:{n}:{method}", lambda: v_subspace(module, residue_field(module.ring), n, method).dim
    )


# ---------- ξ 序列 ----------

PD_FINITE = "pd-finite"
FULL_SPACE = "full-space"
SELF_INJECTIVE = "self-injective"
EXT_WINDOW = "ext-window-to-horizon"
UNRESOLVED = "unresolved"


def plateau_certificate(width: int) -> str:
    return f"heuristic-plateau({width})"


@dataclass
class XiReport:
    module: str
    values: List[int]
    limit: int
    certificate: str
    mu: int
    exact: bool
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "module": self.module,
            "xi": list(self.values),
            "limit": self.limit,
            "certificate": self.certificate,
            "mu": self.mu,
        }

    def table(self) -> str:
        lines = [f"module {self.module}  mu={self.mu}  seed={self.seed}", " n | xi(n)", "---+------"]
        lines += [f"{n:>2} | {v}" for n, v in enumerate(self.values)]
        bound = "exact" if self.exact else "lower bound"
        lines.append(f"limit {self.limit} ({bound}), certificate {self.certificate}")
        return "\n".join(lines)


def _final_plateau_start(values: List[int]) -> int:
    s = len(values) - 1
    while s > 0 and values[s - 1] == values[-1]:
        s -= 1
    return s


def xi_sequence(
    module: Module,
    n_max: Optional[int] = None,
    plateau_width: Optional[int] = None,
    method: Optional[str] = None,
    seed: Optional[int] = None,
) -> XiReport:
    """
    计算 ξ(0..n_max, M) 并给出极限的证书，按优先级：
    pd-finite、full-space、self-injective（精确）；ext-window-to-horizon、heuristic-plateau(W)、
    unresolved（下界）
    """
    config = get_config()
    n_max = int(config.get("n_max", 12) if n_max is None else n_max)
    width = int(config.get("plateau_width", 4) if plateau_width is None else plateau_width)
    seed = int(config.get("seed", 0)) if seed is None else seed
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    mu = module.mu
    name = module.name
    res = module.resolution()
    values: List[int] = []
    for n in range(n_max + 1):
        value = xi_n(module, n, method)
        if values and value < values[-1]:
            logger.error(f"[Xi] sequence of {name} decreases at n={n}: {values} -> {value}")
            raise EngineCheckError("xi sequence is not monotone", {"values": values + [value]})
        values.append(value)
        if res.betti(n + 1) == 0:
            # Ω^{n+1} M = 0：此后 V = Hom(M,k)
            values += [mu] * (n_max - n)
            return _report(module, values, mu, PD_FINITE, True, seed)
        if value == mu:
            values += [mu] * (n_max - n)
            return _report(module, values, mu, FULL_SPACE, True, seed)

    if module.ring.is_gorenstein():
        if any(v != values[0] for v in values):
            logger.error(f"[Xi] Gorenstein collapse fails for {name}: {values}")
            raise EngineCheckError("xi sequence over a self-injective ring is not constant", values)
        return _report(module, values, values[0], SELF_INJECTIVE, True, seed)

    start = _final_plateau_start(values)
    if start < n_max and first_nonvanishing_ext(module, start + 1, n_max) is None:
        return _report(module, values, values[-1], EXT_WINDOW, False, seed)
    if len(values) >= width and len(set(values[-width:])) == 1:
        return _report(module, values, values[-1], plateau_certificate(width), False, seed)
    return _report(module, values, values[-1], UNRESOLVED, False, seed)


def _report(module: Module, values, limit, certificate, exact, seed) -> XiReport:
    report = XiReport(module.name, list(values), int(limit), certificate, module.mu, exact, seed)
    logger.info(f"[Xi] {module.name}: xi={report.values}, limit={limit}, certificate={certificate}")
    return report


@dataclass
class WindowCheck:
    ok: bool
    degree: Optional[int] = None  # 第一个 V_{degree-1} ≠ V_degree 的 degree
    witness: Optional[Morphism] = None

    def __bool__(self):
        return self.ok


def xi_window_check(module: Module, a: int, b: int, method: Optional[str] = None) -> WindowCheck:
    """Ext^i(M,R) = 0（a ≤ i ≤ b）时 V_{a-1} = V_a = ... = V_b"""
    if not 0 < a <= b:
        raise ValueError("window needs 0 < a <= b")
    bad = first_nonvanishing_ext(module, a, b)
    if bad is not None:
        raise PreconditionError(f"Ext^{bad}({module.name},R) != 0 inside the window [{a}, {b}]")
    k = residue_field(module.ring)
    base = v_subspace(module, k, a - 1, method)
    for n in range(a, b + 1):
        cur = v_subspace(module, k, n, method)
        if cur.dim != base.dim:
            witness = next((m for m in cur.basis if not base.contains(m)), None)
            logger.error(f"[Xi] window check failed for {module.name} at n={n}")
            return WindowCheck(False, n, witness)
    return WindowCheck(True)


# ---------- δ 与指标 ----------


def delta(module: Module) -> int:
    """Gorenstein 环上 δ(M) = M 的最大自由直和项的秩，并与 ξ 极限对照"""
    if not module.ring.is_gorenstein():
        raise NotGorensteinError(
            f"delta needs a Gorenstein ring; {module.ring.name} has socle dimension {module.ring.socle_dim()}"
        )
    value = free_summand_split(module).free_rank
    report = xi_sequence(module, 1)
    if not report.exact or report.limit != value:
        logger.error(f"[Delta] {module.name}: delta={value} but xi limit {report.limit} ({report.certificate})")
        raise EngineCheckError("delta disagrees with the xi limit", report.to_dict())
    return value


@dataclass
class IndexReport:
    ring: str
    index: int
    variant: str  # "delta" 或 "xi0"
    values: List[int]
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "index": self.index,
            "variant": self.variant,
            "values": list(self.values),
            "seed": self.seed,
        }


def index_report(ring: Algebra, seed: Optional[int] = None) -> IndexReport:
    """最小的 n ≥ 1 使 δ(R/m^n) ≠ 0（非 Gorenstein 时用 ξ(0, R/m^n)），n 不超过 Loewy 长度"""
    gorenstein = ring.is_gorenstein()
    values = []
    for n in range(1, ring.loewy_length + 1):
        m = quotient_by_power(ring, n)
        value = delta(m) if gorenstein else free_rank(m)
        values.append(value)
        if value:
            return IndexReport(ring.name, n, "delta" if gorenstein else "xi0", values, seed)
    raise EngineCheckError(f"R/m^{ring.loewy_length} has no free summand")


def index(ring: Algebra) -> int:
    return index_report(ring).index
