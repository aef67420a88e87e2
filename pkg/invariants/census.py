# encoding:utf-8
"""
随机模普查：可复现地生成随机模，统计 ξ 序列、成员标记与跳跃
模的生成在主进程按种子顺序完成，计算按模并行，报告按原顺序汇总
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from common.errors import BudgetExceededError, EngineCheckError
from common.logger import logger
from config import Config, get_config, set_config
from ring.algebra import Algebra
from ring.corpus import ring_from_dict, ring_to_dict
from rmod.functors import free_rank
from rmod.module import PresentationMatrix, from_presentation, random_presentation

MEMBERSHIP_DEGREES = (1, 2)


@dataclass
class CensusEntry:
    name: str
    dim: int
    mu: int
    free_rank: int = 0
    xi: List[int] = field(default_factory=list)
    limit: Optional[int] = None
    certificate: str = ""
    membership: dict = field(default_factory=dict)
    error: str = ""

    @property
    def jumps(self) -> int:
        return sum(1 for a, b in zip(self.xi, self.xi[1:]) if b > a)

    @property
    def positive_jumps(self) -> int:
        """ξ(n+1) > ξ(n) > 0 的次数"""
        return sum(1 for a, b in zip(self.xi, self.xi[1:]) if b > a > 0)

    def to_dict(self) -> dict:
        return {
            "module": self.name,
            "dim": self.dim,
            "mu": self.mu,
            "free_rank": self.free_rank,
            "xi": list(self.xi),
            "limit": self.limit,
            "certificate": self.certificate,
            "membership": dict(self.membership),
            "error": self.error,
        }


@dataclass
class CensusReport:
    ring: str
    seed: int
    n_max: int
    entries: List[CensusEntry]

    def stats(self) -> dict:
        done = [e for e in self.entries if not e.error]
        return {
            "modules": len(self.entries),
            "completed": len(done),
            "budget_exceeded": sum(1 for e in self.entries if e.error == "budget"),
            "engine_errors": sum(1 for e in self.entries if e.error == "engine-check"),
            "with_jumps": sum(1 for e in done if e.jumps),
            "with_positive_jumps": sum(1 for e in done if e.positive_jumps),
            "constant_profiles": sum(1 for e in done if len(set(e.xi)) <= 1),
            "profile_equals_free_rank": sum(1 for e in done if e.xi and e.xi[0] == e.free_rank),
        }

    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "seed": self.seed,
            "n_max": self.n_max,
            "stats": self.stats(),
            "modules": [e.to_dict() for e in self.entries],
        }

    def table(self) -> str:
        lines = [f"census over {self.ring}, seed={self.seed}, n_max={self.n_max}"]
        lines.append(f"{'module':<14}{'dim':>4}{'mu':>4}  {'xi':<28}{'certificate':<26}flags")
        for e in self.entries:
            if e.error:
                lines.append(f"{e.name:<14}{e.dim:>4}{e.mu:>4}  ({e.error})")
                continue
            flags = " ".join(
                f"n{n}:" + "".join(c if ok else "-" for c, ok in zip("AEH", v)) for n, v in e.membership.items()
            )
            lines.append(f"{e.name:<14}{e.dim:>4}{e.mu:>4}  {str(e.xi):<28}{e.certificate:<26}{flags}")
        lines.append(" ".join(f"{k}={v}" for k, v in self.stats().items()))
        return "\n".join(lines)


def evaluate_module(ring: Algebra, entries: np.ndarray, name: str, n_max: int) -> CensusEntry:
    """单个模的 ξ 序列与成员标记"""
    from approx.construct import membership
    from invariants.xi import xi_sequence

    module = from_presentation(PresentationMatrix(ring, entries), name)
    entry = CensusEntry(name, module.dim, module.mu)
    try:
        entry.free_rank = free_rank(module)
        report = xi_sequence(module, n_max)
        entry.xi, entry.limit, entry.certificate = report.values, report.limit, report.certificate
        for n in MEMBERSHIP_DEGREES:
            m = membership(module, n)
            entry.membership[n] = (m.in_A, m.in_E, m.in_H)
    except BudgetExceededError as e:
        logger.warning(f"[Census] {name}: {e}")
        entry.error = "budget"
    except EngineCheckError as e:
        logger.error(f"[Census] {name}: engine self-check failed: {e}")
        entry.error = "engine-check"
    return entry


def _worker(ring_spec: dict, ring_name: str, config: dict, entries: list, shape: tuple, name: str, n_max: int):
    set_config(Config(config))
    ring = ring_from_dict(ring_spec, ring_name)
    return evaluate_module(ring, np.array(entries, dtype=np.int64).reshape(shape), name, n_max)


def run_census(
    ring: Algebra,
    count: Optional[int] = None,
    dim_max: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    n_max: Optional[int] = None,
) -> CensusReport:
    config = get_config()
    count = int(config.get("census_count", 20) if count is None else count)
    dim_max = int(config.get("census_dim_max", 24) if dim_max is None else dim_max)
    seed = int(config.get("seed", 0) if seed is None else seed)
    workers = int(config.get("workers", 1) if workers is None else workers)
    n_max = int(config.get("census_n_max", 4) if n_max is None else n_max)

    rng = np.random.default_rng(seed)
    tasks = []
    for i in range(count):
        pres = random_presentation(ring, rng, dim_max)
        tasks.append((pres.entries, f"M{i:03d}[{pres.rows}x{pres.cols}]"))
    logger.info(f"[Census] {count} modules over {ring.name}, seed={seed}, workers={workers}")

    if workers <= 1:
        results = [evaluate_module(ring, e, name, n_max) for e, name in tasks]
    else:
        ring_data = ring_to_dict(ring)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_worker, ring_data, ring.name, dict(config), e.tolist(), e.shape, name, n_max)
                for e, name in tasks
            ]
            results = [fu.result() for fu in futures]
    return CensusReport(ring.name, seed, n_max, results)
