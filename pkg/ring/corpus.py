# encoding:utf-8
"""
内置环语料与环文件读写
"""

import json
import os
import threading
from typing import Dict, Tuple

from common.errors import ParseError
from ring.algebra import Algebra, build_from_structure_constants, build_monomial_quotient

# 名字 → (变量, 单项式关系)
BUILTIN_RINGS: Dict[str, Tuple[Tuple[str, ...], Tuple[str, ...]]] = {
    "A": (("x",), ("x^3",)),
    "B": (("x", "y"), ("x^2", "x*y", "y^2")),
    "C": (("x", "y"), ("x^2", "y^2")),
    "D": (("x", "y"), ("x^3", "x*y", "y^2")),
    "E": (("x",), ("x^2",)),
}

ALIASES = {"x2": "E"}

_cache: Dict[Tuple[str, int], Algebra] = {}
_cache_lock = threading.Lock()


def builtin_ring(name: str, p: int = 101) -> Algebra:
    """按名字取内置环（按 (名字, p) 缓存）"""
    key = ALIASES.get(name, name)
    if key not in BUILTIN_RINGS:
        raise ParseError(f"unknown builtin ring {name!r}; known: {sorted(BUILTIN_RINGS)}")
    with _cache_lock:
        ring = _cache.get((key, p))
        if ring is None:
            variables, relations = BUILTIN_RINGS[key]
            ring = build_monomial_quotient(variables, relations, p=p, name=key)
            _cache[(key, p)] = ring
        return ring


def ring_from_dict(data: dict, name: str = "") -> Algebra:
    """
    环文件格式：
    {"p": int, "kind": "structure_constants", "basis": [...], "table": [[[int]]]}
    {"p": int, "kind": "monomial_quotient", "vars": [...], "relations": ["x^2", ...]}
    """
    if not isinstance(data, dict):
        raise ParseError("ring file must be a JSON object")
    kind = data.get("kind", "structure_constants")
    if kind == "structure_constants":
        return build_from_structure_constants(data, name=name)
    if kind == "monomial_quotient":
        try:
            return build_monomial_quotient(
                data["vars"], data["relations"], p=int(data.get("p", 101)), name=name
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"monomial quotient incomplete: {e}")
    raise ParseError(f"unknown ring kind {kind!r}")


def load_ring(path_or_name: str, p: int = 101) -> Algebra:
    """内置名字或 JSON 文件路径"""
    if ALIASES.get(path_or_name, path_or_name) in BUILTIN_RINGS:
        return builtin_ring(path_or_name, p)
    if not os.path.exists(path_or_name):
        raise ParseError(f"ring {path_or_name!r} is neither a builtin nor a file")
    try:
        with open(path_or_name, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read ring file {path_or_name}: {e}")
    name = os.path.splitext(os.path.basename(path_or_name))[0]
    return ring_from_dict(data, name=name)


def ring_to_dict(ring: Algebra) -> dict:
    """导出为结构常数格式"""
    return {
        "p": ring.p,
        "kind": "structure_constants",
        "basis": list(ring.basis_names),
        "table": ring.table.tolist(),
    }
