# encoding:utf-8
"""
工作区：环与模的注册表
管理按名字解析的内置环、内置模与 JSON 文件中的对象
"""

import json
import os
import re
import threading
from typing import Dict, Optional, Tuple

import numpy as np

from common.errors import ParseError, PreconditionError
from common.logger import logger
from config import Config, get_config
from ring.algebra import Algebra
from ring.corpus import load_ring, ring_from_dict
from rmod.module import (
    FreeModule,
    Module,
    PresentationMatrix,
    from_presentation,
    maximal_ideal,
    quotient_by_power,
    residue_field,
)

_FREE = re.compile(r"^free:(\d+)$")
_POWER = re.compile(r"^R/m\^(\d+)$")


class Workspace:
    """环注册表（名字 → Algebra）与模注册表（(环, 模名) → Module）"""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or get_config()
        self.rings: Dict[str, Algebra] = {}
        self.modules: Dict[Tuple[int, str], Module] = {}
        self._lock = threading.RLock()
        logger.debug("[Workspace] Initialized")

    # ---------- 环 ----------

    def register_ring(self, name: str, ring: Algebra) -> Algebra:
        with self._lock:
            old = self.rings.get(name)
            if old is not None and old is not ring:
                raise PreconditionError(f"ring name {name!r} is already registered")
            self.rings[name] = ring
            return ring

    def ring(self, name_or_path: str, p: Optional[int] = None) -> Algebra:
        """内置名字或 JSON 路径；同名重复解析返回同一个对象"""
        p = int(self.config.get("p", 101) if p is None else p)
        key = name_or_path if p == int(self.config.get("p", 101)) else f"{name_or_path}@{p}"
        with self._lock:
            if key in self.rings:
                return self.rings[key]
            ring = load_ring(name_or_path, p)
            logger.info(f"[Workspace] Ring registered: {key} (d={ring.dim})")
            return self.register_ring(key, ring)

    # ---------- 模 ----------

    def register_module(self, ring: Algebra, name: str, module: Module) -> Module:
        if module.ring is not ring:
            raise PreconditionError(f"module {name!r} is not over ring {ring.name}")
        with self._lock:
            key = (id(ring), name)
            old = self.modules.get(key)
            if old is not None and old is not module:
                raise PreconditionError(f"module name {name!r} is already registered over {ring.name}")
            self.modules[key] = module
            return module

    def module(self, source: str, ring: Algebra) -> Module:
        """
        解析模：
        - 内置："k"、"maximal_ideal"（或 "m"）、"free:r"、"R/m^n"
        - 已注册的名字
        - JSON 文件：{"presentation": [[...]], "generators": r} 或 {"dim": D, "actions": [...]}
        """
        with self._lock:
            key = (id(ring), source)
            if key in self.modules:
                return self.modules[key]
            module = self._build(source, ring)
            logger.debug(f"[Workspace] Module registered: {source} over {ring.name} (dim={module.dim})")
            return self.register_module(ring, source, module)

    def _build(self, source: str, ring: Algebra) -> Module:
        if source == "k":
            return residue_field(ring)
        if source in ("m", "maximal_ideal"):
            return maximal_ideal(ring)
        match = _FREE.match(source)
        if match:
            return FreeModule(ring, int(match.group(1)))
        match = _POWER.match(source)
        if match:
            return quotient_by_power(ring, int(match.group(1)))
        if os.path.exists(source):
            try:
                with open(source, "r", encoding="utf-8") as f:
                    data = json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                raise ParseError(f"cannot read module file {source}: {e}")
            name = os.path.splitext(os.path.basename(source))[0]
            return module_from_dict(data, ring, name)
        raise ParseError(f"unknown module {source!r}")

    def module_file_ring(self, source: str) -> Optional[Algebra]:
        """模文件中声明的环；source 不是文件或未声明时返回 None"""
        if not os.path.isfile(source):
            return None
        try:
            with open(source, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ParseError(f"cannot read module file {source}: {e}")
        return declared_ring(data, workspace=self)

    def clear(self):
        with self._lock:
            self.rings.clear()
            self.modules.clear()
            logger.info("[Workspace] Cleared")


def declared_ring(data: dict, p: Optional[int] = None, workspace: Optional[Workspace] = None) -> Optional[Algebra]:
    """模文件 "ring" 字段声明的环：环名、环文件路径或结构常数；未声明时返回 None"""
    if not isinstance(data, dict) or "ring" not in data:
        return None
    declared = data["ring"]
    if isinstance(declared, str):
        return (workspace or get_workspace()).ring(declared, p)
    if isinstance(declared, dict):
        return ring_from_dict(declared)
    raise ParseError("module 'ring' must be a ring name, a path or a ring object")


def module_from_dict(data: dict, ring: Algebra, name: str = "") -> Module:
    """模文件：表示矩阵（元素为环元素字符串）或作用矩阵"""
    if not isinstance(data, dict):
        raise ParseError("module description must be a JSON object")
    name = data.get("name", name)
    declared = declared_ring(data, ring.p)
    if declared is not None and (declared.p != ring.p or not np.array_equal(declared.table, ring.table)):
        raise ParseError(f"module {name!r} is declared over ring {declared.name!r}, not {ring.name!r}")
    if "actions" in data:
        try:
            dim = int(data["dim"])
            acts = np.array(data["actions"], dtype=np.int64).reshape(ring.dim, dim, dim)
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"bad action matrices: {e}")
        return Module(ring, acts, name, check=True)
    if "presentation" in data:
        rows = data["presentation"]
        if not isinstance(rows, list):
            raise ParseError("presentation must be a list of rows")
        r0 = int(data.get("generators", len(rows)))
        if rows and len(rows) != r0:
            raise ParseError(f"presentation has {len(rows)} rows but {r0} generators")
        pres = (
            PresentationMatrix.from_strings(ring, rows, r0)
            if rows and rows[0]
            else PresentationMatrix.zero(ring, r0, 0)
        )
        return from_presentation(pres, name)
    raise ParseError("module description needs 'presentation' or 'actions'")


# 全局工作区实例
_workspace: Optional[Workspace] = None


def get_workspace() -> Workspace:
    """获取全局工作区"""
    global _workspace
    if _workspace is None:
        _workspace = Workspace()
    return _workspace


def reset_workspace(config: Optional[Config] = None) -> Workspace:
    """按给定配置重建全局工作区（CLI 参数覆盖、测试使用）"""
    global _workspace
    _workspace = Workspace(config)
    return _workspace
