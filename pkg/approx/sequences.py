# encoding:utf-8
"""
短正合列 0 → left → mid → right → 0 及其验证、填充与 JSON 读写
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np

from common.errors import EngineError, ParseError, PreconditionError
from homology.ext import first_nonvanishing_ext
from ring.algebra import Algebra
from ring.corpus import ring_from_dict, ring_to_dict
from rmod.functors import is_isomorphic
from rmod.module import FreeModule, Module, Morphism, block_morphism, direct_sum
from rmod.resolution import pd_at_most


class SeqKind(Enum):
    """序列类型"""

    AB = "ab"  # n-AB 逼近，right = M
    ORIGIN = "origin"  # n-origin 扩张，mid = M ⊕ P
    HULL = "hull"  # n-FPD 包络，left = M


@dataclass
class ShortExactSeq:
    left: Module
    mid: Module
    right: Module
    inj: Morphism
    surj: Morphism
    kind: SeqKind
    n: int
    base: Optional[Module] = None  # ORIGIN 时 mid = base ⊕ R^r

    @property
    def module(self) -> Module:
        """序列所逼近的模 M"""
        if self.kind == SeqKind.AB:
            return self.right
        if self.kind == SeqKind.HULL:
            return self.left
        return self.base if self.base is not None else self.mid

    def summary(self) -> dict:
        return {
            "kind": self.kind.value,
            "n": self.n,
            "dims": [self.left.dim, self.mid.dim, self.right.dim],
            "mu": [self.left.mu, self.mid.mu, self.right.mu],
        }

    def __repr__(self):
        return (
            f"{self.kind.value}({self.n}): 0 -> {self.left.name} -> {self.mid.name} -> {self.right.name} -> 0"
        )


@dataclass
class Clause:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class SesReport:
    clauses: List[Clause] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.clauses)

    def failures(self) -> List[str]:
        return [c.name for c in self.clauses if not c.ok]

    def add(self, name: str, ok: bool, detail: str = ""):
        self.clauses.append(Clause(name, bool(ok), detail))

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "clauses": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.clauses],
        }


def _ext_clause(report: SesReport, name: str, module: Module, top: int):
    if top < 1:
        report.add(name, True, "empty range")
        return
    bad = first_nonvanishing_ext(module, 1, top)
    report.add(name, bad is None, "" if bad is None else f"Ext^{bad}({module.name},R) != 0 at degree {bad}")


def _is_base_plus_free(mid: Module, base: Module) -> bool:
    d = mid.ring.dim
    extra = mid.dim - base.dim
    if extra < 0 or extra % d:
        return False
    expected, _, _ = direct_sum(base, FreeModule(mid.ring, extra // d))
    if np.array_equal(expected.actions, mid.actions):
        return True
    return is_isomorphic(mid, expected).isomorphic


def verify_ses(seq: ShortExactSeq) -> SesReport:
    """逐条重新检验正合性与所属类型的条件，每个不成立的条款单独报告"""
    report = SesReport()
    f = seq.mid.field
    for label, mor in (("inj-equivariant", seq.inj), ("surj-equivariant", seq.surj)):
        try:
            mor.check_equivariance()
            report.add(label, True)
        except EngineError as e:
            report.add(label, False, str(e))
    report.add("injective", seq.inj.is_injective(), f"rank {seq.inj.rank()} of {seq.left.dim}")
    report.add("surjective", seq.surj.is_surjective(), f"rank {seq.surj.rank()} of {seq.right.dim}")
    composite = f.matmul(seq.surj.mat, seq.inj.mat)
    exact = not np.any(composite) and seq.inj.rank() + seq.surj.rank() == seq.mid.dim
    report.add("exactness", exact, "" if exact else "ker surj != im inj")

    n = seq.n
    if seq.kind == SeqKind.AB:
        ok = seq.left.dim == 0 if n == 0 else pd_at_most(seq.left, n - 1)
        report.add("left-pd", ok, f"pd(left) <= {n - 1}")
        _ext_clause(report, "mid-ext", seq.mid, n)
    elif seq.kind == SeqKind.ORIGIN:
        if seq.base is not None:
            report.add("mid-base", _is_base_plus_free(seq.mid, seq.base), "mid = M + free")
        report.add("right-pd", pd_at_most(seq.right, n), f"pd(right) <= {n}")
        _ext_clause(report, "left-ext", seq.left, n)
    else:
        report.add("mid-pd", pd_at_most(seq.mid, n), f"pd(mid) <= {n}")
        _ext_clause(report, "right-ext", seq.right, n + 1)
    return report


def pad_sequence(seq: ShortExactSeq, r: int) -> ShortExactSeq:
    """在两个非 M 项上同时加 R^r，得到故意不极小的序列"""
    if r <= 0:
        return seq
    ring = seq.mid.ring
    d = ring.dim
    free = FreeModule(ring, r)
    eye = np.eye(r * d, dtype=np.int64)
    if seq.kind == SeqKind.AB:
        left, _, _ = direct_sum(seq.left, free)
        mid, _, _ = direct_sum(seq.mid, free)
        inj = block_morphism(left, mid, [seq.mid.dim, r * d], [seq.left.dim, r * d], [[seq.inj.mat, None], [None, eye]])
        surj = block_morphism(mid, seq.right, [seq.right.dim], [seq.mid.dim, r * d], [[seq.surj.mat, None]])
        return ShortExactSeq(left, mid, seq.right, inj, surj, seq.kind, seq.n, seq.base)
    if seq.kind == SeqKind.HULL:
        mid, _, _ = direct_sum(seq.mid, free)
        right, _, _ = direct_sum(seq.right, free)
        inj = block_morphism(seq.left, mid, [seq.mid.dim, r * d], [seq.left.dim], [[seq.inj.mat], [None]])
        surj = block_morphism(mid, right, [seq.right.dim, r * d], [seq.mid.dim, r * d], [[seq.surj.mat, None], [None, eye]])
        return ShortExactSeq(seq.left, mid, right, inj, surj, seq.kind, seq.n, seq.base)
    raise PreconditionError("padding is defined for AB approximations and FPD hulls only")


# ---------- JSON ----------


def _module_to_json(module: Module) -> dict:
    return {"name": module.name, "dim": module.dim, "actions": module.actions.tolist()}


def _module_from_json(ring: Algebra, data: dict) -> Module:
    try:
        dim = int(data["dim"])
        acts = np.array(data["actions"], dtype=np.int64).reshape(ring.dim, dim, dim)
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"bad module entry in sequence file: {e}")
    return Module(ring, acts, data.get("name", ""), check=True)


def seq_to_json(seq: ShortExactSeq) -> dict:
    """自包含的序列文件：环、三个模的作用矩阵与两个映射"""
    data = {
        "ring": ring_to_dict(seq.mid.ring),
        "kind": seq.kind.value,
        "n": seq.n,
        "left": _module_to_json(seq.left),
        "mid": _module_to_json(seq.mid),
        "right": _module_to_json(seq.right),
        "inj": seq.inj.mat.tolist(),
        "surj": seq.surj.mat.tolist(),
    }
    if seq.base is not None:
        data["base"] = _module_to_json(seq.base)
    return data


def seq_from_json(data: dict, ring: Optional[Algebra] = None) -> ShortExactSeq:
    if not isinstance(data, dict):
        raise ParseError("sequence file must be a JSON object")
    if ring is None:
        ring = ring_from_dict(data.get("ring", {}))
    try:
        kind = SeqKind(data["kind"])
        n = int(data["n"])
    except (KeyError, ValueError) as e:
        raise ParseError(f"bad sequence header: {e}")
    left = _module_from_json(ring, data.get("left", {}))
    mid = _module_from_json(ring, data.get("mid", {}))
    right = _module_from_json(ring, data.get("right", {}))
    base = _module_from_json(ring, data["base"]) if "base" in data else None
    try:
        inj = Morphism(left, mid, np.array(data["inj"], dtype=np.int64).reshape(mid.dim, left.dim))
        surj = Morphism(mid, right, np.array(data["surj"], dtype=np.int64).reshape(right.dim, mid.dim))
    except (KeyError, ValueError) as e:
        raise ParseError(f"bad sequence maps: {e}")
    return ShortExactSeq(left, mid, right, inj, surj, kind, n, base)
