# encoding:utf-8
"""
有限生成 R-模的作用表示
模 M 存为 d 个 D×D 作用矩阵 A_0..A_{d-1}（A_i 为 b_i 的作用），同态为等变矩阵
"""

import threading
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from common.errors import DimensionMismatchError, ModuleAxiomError, RingMismatchError
from common.logger import logger
from ring.algebra import Algebra


@dataclass(frozen=True, eq=False)
class PresentationMatrix:
    """
    R 上的 r0×r1 矩阵，表示 R^{r1} → R^{r0}
    entries[i, j] 为第 (i, j) 个元素的系数向量
    """

    ring: Algebra
    entries: np.ndarray

    def __post_init__(self):
        e = self.ring.field.reduce(self.entries)
        if e.ndim != 3 or e.shape[2] != self.ring.dim:
            raise DimensionMismatchError(f"presentation entries have shape {e.shape}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    def expand(self) -> np.ndarray:
        """k-线性展开：(r0·d)×(r1·d) 矩阵"""
        d = self.ring.dim
        e = np.einsum("ijk,kab->iajb", self.entries, self.ring.mult)
        return e.reshape(self.rows * d, self.cols * d) % self.ring.p

    def transpose(self) -> "PresentationMatrix":
        return PresentationMatrix(self.ring, self.entries.transpose(1, 0, 2))

    def is_minimal(self) -> bool:
        """所有元素都在 m 中"""
        return not np.any(self.entries[:, :, 0])

    def column(self, j: int) -> np.ndarray:
        """第 j 列作为 R^{r0} 中的 k-坐标向量"""
        return self.entries[:, j, :].reshape(-1)

    def to_strings(self) -> List[List[str]]:
        return [[self.ring.format_element(self.entries[i, j]) for j in range(self.cols)] for i in range(self.rows)]

    @classmethod
    def from_columns(cls, ring: Algebra, rows: int, vectors: np.ndarray) -> "PresentationMatrix":
        """由 R^{rows} 中若干 k-坐标列向量构成矩阵"""
        v = ring.field.reduce(vectors)
        return cls(ring, v.reshape(rows, ring.dim, v.shape[1]).transpose(0, 2, 1))

    @classmethod
    def from_strings(
        cls, ring: Algebra, rows: Sequence[Sequence[str]], r0: Optional[int] = None
    ) -> "PresentationMatrix":
        rows = [list(r) for r in rows]
        r0 = len(rows) if r0 is None else r0
        r1 = len(rows[0]) if rows else 0
        e = np.zeros((r0, r1, ring.dim), dtype=np.int64)
        for i, row in enumerate(rows):
            if len(row) != r1:
                raise DimensionMismatchError("presentation rows have different lengths")
            for j, s in enumerate(row):
                e[i, j] = ring.parse_element(s)
        return cls(ring, e)

    @classmethod
    def zero(cls, ring: Algebra, rows: int, cols: int) -> "PresentationMatrix":
        return cls(ring, np.zeros((rows, cols, ring.dim), dtype=np.int64))


class Module:
    """有限生成 R-模"""

    def __init__(self, ring: Algebra, actions, name: str = "", check: bool = False):
        self.ring = ring
        self.field = ring.field
        a = self.field.reduce(actions)
        if a.ndim != 3 or a.shape[0] != ring.dim or a.shape[1] != a.shape[2]:
            raise DimensionMismatchError(f"action array has shape {a.shape}")
        a.setflags(write=False)
        self.actions = a
        self.dim = int(a.shape[1])
        self.name = name
        # 惰性缓存（分解、生成元、对偶等），由锁保护
        self._lock = threading.RLock()
        self._cache: Dict[str, object] = {}
        self._resolution = None
        if check:
            self.check_axioms()

    def check_axioms(self):
        """A_0 = I 且 A_i A_j = Σ_l c_ijl A_l"""
        if not np.array_equal(self.actions[0], np.eye(self.dim, dtype=np.int64)):
            raise ModuleAxiomError("b_0 does not act as the identity")
        lhs = np.einsum("iab,jbc->ijac", self.actions, self.actions) % self.field.p
        rhs = np.einsum("ijl,lac->ijac", self.ring.table, self.actions) % self.field.p
        bad = np.argwhere(np.any(lhs != rhs, axis=(2, 3)))
        if bad.size:
            i, j = bad[0]
            raise ModuleAxiomError(f"A_{i}A_{j} does not match b_{i}b_{j}")

    # ---------- 基本数据 ----------

    def gen_actions(self) -> List[np.ndarray]:
        return [self.actions[g] for g in self.ring.generators]

    def act(self, r) -> np.ndarray:
        """环元素 r（系数向量）的作用矩阵"""
        return np.einsum("k,kab->ab", self.field.reduce(r), self.actions) % self.field.p

    def is_zero(self) -> bool:
        return self.dim == 0

    def cached(self, key: str, factory):
        """线程安全的惰性缓存"""
        with self._lock:
            if key not in self._cache:
                self._cache[key] = factory()
            return self._cache[key]

    def maximal_ideal_image(self) -> np.ndarray:
        """mM 的规范基"""

        def build():
            acts = self.gen_actions()
            if not acts or self.dim == 0:
                return self.field.zeros(self.dim, 0)
            return self.field.column_space(np.hstack(acts))

        return self.cached("m_image", build)

    def minimal_generators(self) -> np.ndarray:
        """M/mM 一组基的提升，D×μ 矩阵"""
        return self.cached("generators", lambda: generators_modulo(self, None))

    @property
    def mu(self) -> int:
        return int(self.minimal_generators().shape[1])

    def resolution(self):
        """极小自由分解（惰性，线程安全）"""
        from rmod.resolution import Resolution

        with self._lock:
            if self._resolution is None:
                self._resolution = Resolution(self)
            return self._resolution

    def identity(self) -> "Morphism":
        return Morphism(self, self, self.field.eye(self.dim))

    def zero_map_to(self, target: "Module") -> "Morphism":
        return Morphism(self, target, self.field.zeros(target.dim, self.dim))

    def __repr__(self):
        return f"Module({self.name or '?'}, dim={self.dim}, ring={self.ring.name})"


class FreeModule(Module):
    """自由模 R^r，作用为 r 个正则表示块"""

    def __init__(self, ring: Algebra, rank: int, name: str = ""):
        acts = np.stack([np.kron(np.eye(rank, dtype=np.int64), ring.mult[b]) for b in range(ring.dim)])
        super().__init__(ring, acts.reshape(ring.dim, rank * ring.dim, rank * ring.dim), name or f"R^{rank}")
        self.rank = rank


class Morphism:
    """等变线性映射 source → target，mat 为 (target dim)×(source dim) 矩阵"""

    def __init__(self, source: Module, target: Module, mat, check: bool = False):
        if source.ring is not target.ring:
            raise RingMismatchError("morphism between modules over different rings")
        self.source = source
        self.target = target
        self.field = source.field
        m = self.field.reduce(mat)
        if m.size != target.dim * source.dim or (m.ndim == 2 and m.shape != (target.dim, source.dim)):
            raise DimensionMismatchError(
                f"matrix of shape {m.shape} for a map {source.dim} -> {target.dim}"
            )
        m = m.reshape(target.dim, source.dim).copy()
        m.setflags(write=False)
        self.mat = m
        if check:
            self.check_equivariance()

    def check_equivariance(self):
        p = self.field.p
        for g in self.source.ring.generators:
            if not np.array_equal(
                (self.mat @ self.source.actions[g]) % p, (self.target.actions[g] @ self.mat) % p
            ):
                raise ModuleAxiomError(f"map is not equivariant for generator b_{g}")

    def compose(self, other: "Morphism") -> "Morphism":
        """self ∘ other"""
        if other.target.dim != self.source.dim:
            raise DimensionMismatchError("cannot compose: dimensions differ")
        return Morphism(other.source, self.target, self.field.matmul(self.mat, other.mat))

    def __add__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target, self.mat + other.mat)

    def __sub__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target, self.mat - other.mat)

    def __neg__(self) -> "Morphism":
        return Morphism(self.source, self.target, -self.mat)

    def scale(self, c: int) -> "Morphism":
        return Morphism(self.source, self.target, self.mat * int(c))

    def rank(self) -> int:
        return self.field.rank(self.mat)

    def is_zero(self) -> bool:
        return not np.any(self.mat)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_isomorphism(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def image_basis(self) -> np.ndarray:
        return self.field.column_space(self.mat)

    def kernel_basis(self) -> np.ndarray:
        return self.field.kernel_basis(self.mat)

    def tensor_k_rank(self) -> int:
        """f ⊗ k 的秩：source/m·source → target/m·target"""
        mt = self.target.maximal_ideal_image()
        gens = self.source.minimal_generators()
        return self.field.quotient_dim(self.field.matmul(self.mat, gens), mt)

    def __repr__(self):
        return f"Morphism({self.source.name or '?'} -> {self.target.name or '?'}, {self.mat.shape})"


# ---------- 构造 ----------


def generators_modulo(module: Module, sub: Optional[np.ndarray]) -> np.ndarray:
    """
    模掉 mM + sub 后的一组基的提升（单位向量），sub 应为子模
    :return: D×m 矩阵
    """
    f = module.field
    base = module.maximal_ideal_image()
    if sub is not None and sub.shape[1]:
        base = f.column_space(np.hstack([base, f.reduce(sub)]))
    coords = f.complement_coordinates(base)
    g = f.zeros(module.dim, len(coords))
    for t, c in enumerate(coords):
        g[c, t] = 1
    return g


def free_module(ring: Algebra, rank: int) -> FreeModule:
    return FreeModule(ring, rank)


def zero_module(ring: Algebra) -> Module:
    return Module(ring, np.zeros((ring.dim, 0, 0), dtype=np.int64), "0")


def _as_columns(arr: np.ndarray, rows: int) -> np.ndarray:
    """向量或矩阵整理为 rows 行；空数组也给出确定的列数"""
    if arr.ndim == 2 and arr.shape[0] == rows:
        return arr
    return arr.reshape(rows, arr.size // rows if rows else 0)


def quotient(module: Module, basis, name: str = "") -> Tuple[Module, Morphism, np.ndarray]:
    """
    商模 M / span(basis)
    :return: (商模, 投影, 截面矩阵 S)
    """
    f = module.field
    w = f.column_space(_as_columns(f.reduce(basis), module.dim))
    q, s = f.quotient_map(w)
    for b in module.ring.generators:
        if np.any(f.matmul(q, module.actions[b], w)):
            raise ModuleAxiomError("quotient by a subspace that is not a submodule")
    acts = np.einsum("xa,kab,by->kxy", q, module.actions, s) % f.p
    quo = Module(module.ring, acts, name or f"{module.name}/W")
    return quo, Morphism(module, quo, q), s


def submodule(module: Module, basis, name: str = "", reduce_basis: bool = True) -> Tuple[Module, Morphism]:
    """
    子模 span(basis) ⊆ M
    :param reduce_basis: 为 False 时直接使用给定的（列无关的）基作为坐标
    :return: (子模, 包含映射)
    """
    f = module.field
    k = _as_columns(f.reduce(basis), module.dim)
    if reduce_basis:
        k = f.column_space(k)
    linv = f.left_inverse(k)
    acts = np.einsum("xa,kab,by->kxy", linv, module.actions, k) % f.p
    for b in module.ring.generators:
        if not np.array_equal(f.matmul(module.actions[b], k), f.matmul(k, acts[b])):
            raise ModuleAxiomError("subspace is not a submodule")
    sub = Module(module.ring, acts, name or f"sub({module.name})")
    return sub, Morphism(sub, module, k)


def kernel(mor: Morphism, name: str = "") -> Tuple[Module, Morphism]:
    return submodule(mor.source, mor.kernel_basis(), name or f"ker({mor.source.name})")


def cokernel(mor: Morphism, name: str = "") -> Tuple[Module, Morphism]:
    quo, proj, _ = quotient(mor.target, mor.mat, name or f"coker({mor.target.name})")
    return quo, proj


def image(mor: Morphism, name: str = "") -> Tuple[Module, Morphism]:
    return submodule(mor.target, mor.mat, name or f"im({mor.source.name})")


def cokernel_of_presentation(pres: PresentationMatrix, name: str = "") -> Tuple[Module, np.ndarray]:
    """
    coker(R^{r1} → R^{r0})
    :return: (模, 从 R^{r0} 的 k-坐标到模坐标的商矩阵)
    """
    ring = pres.ring
    f = ring.field
    w = f.column_space(pres.expand()) if pres.cols else f.zeros(pres.rows * ring.dim, 0)
    q, s = f.quotient_map(w)
    free = FreeModule(ring, pres.rows)
    acts = np.einsum("xa,kab,by->kxy", q, free.actions, s) % f.p
    return Module(ring, acts, name or f"coker[{pres.rows}x{pres.cols}]"), q


def from_presentation(pres: PresentationMatrix, name: str = "") -> Module:
    return cokernel_of_presentation(pres, name)[0]


def direct_sum(*modules: Module, name: str = "") -> Tuple[Module, List[Morphism], List[Morphism]]:
    """
    直和，返回 (M_1 ⊕ ... ⊕ M_s, 典范嵌入, 典范投影)
    """
    if not modules:
        raise DimensionMismatchError("direct sum of no modules")
    ring = modules[0].ring
    for m in modules:
        if m.ring is not ring:
            raise RingMismatchError("direct sum of modules over different rings")
    total = sum(m.dim for m in modules)
    acts = np.zeros((ring.dim, total, total), dtype=np.int64)
    offset = 0
    for m in modules:
        acts[:, offset : offset + m.dim, offset : offset + m.dim] = m.actions
        offset += m.dim
    s = Module(ring, acts, name or " + ".join(m.name or "?" for m in modules))
    injections, projections = [], []
    offset = 0
    for m in modules:
        e = np.zeros((total, m.dim), dtype=np.int64)
        e[offset : offset + m.dim] = np.eye(m.dim, dtype=np.int64)
        injections.append(Morphism(m, s, e))
        projections.append(Morphism(s, m, e.T))
        offset += m.dim
    return s, injections, projections


def block_morphism(
    source: Module,
    target: Module,
    row_dims: Sequence[int],
    col_dims: Sequence[int],
    blocks: Sequence[Sequence[Optional[np.ndarray]]],
) -> Morphism:
    """由块矩阵拼出同态，None 表示零块"""
    mat = np.zeros((sum(row_dims), sum(col_dims)), dtype=np.int64)
    r0 = 0
    for i, h in enumerate(row_dims):
        c0 = 0
        for j, w in enumerate(col_dims):
            b = blocks[i][j]
            if b is not None:
                mat[r0 : r0 + h, c0 : c0 + w] = np.asarray(b, dtype=np.int64).reshape(h, w)
            c0 += w
        r0 += h
    return Morphism(source, target, mat)


# ---------- 内置模 ----------


def residue_field(ring: Algebra) -> Module:
    """k = R/m，m 作用为 0"""
    acts = np.zeros((ring.dim, 1, 1), dtype=np.int64)
    acts[0, 0, 0] = 1
    return Module(ring, acts, "k")


def maximal_ideal(ring: Algebra) -> Module:
    r = FreeModule(ring, 1)
    return submodule(r, np.eye(ring.dim, dtype=np.int64)[:, 1:], "m")[0]


def quotient_by_power(ring: Algebra, n: int) -> Module:
    """R/m^n"""
    r = FreeModule(ring, 1)
    if n <= 0:
        return zero_module(ring)
    w = ring.powers[n] if n < len(ring.powers) else ring.field.zeros(ring.dim, 0)
    return quotient(r, w, f"R/m^{n}")[0]


def random_presentation(
    ring: Algebra, rng: np.random.Generator, dim_max: int = 24, max_gens: int = 3, max_rels: int = 3
) -> PresentationMatrix:
    """元素落在 m 中的随机表示矩阵，r0·d ≤ dim_max"""
    d = ring.dim
    top = max(1, min(max_gens, dim_max // d))
    r0 = int(rng.integers(1, top + 1))
    r1 = int(rng.integers(0, max_rels + 1))
    vals = rng.integers(0, ring.p, size=(r0, r1, d), dtype=np.int64)
    mask = rng.random(size=(r0, r1, d)) < 0.6
    entries = vals * mask
    entries[:, :, 0] = 0
    return PresentationMatrix(ring, entries)


def random_module(
    ring: Algebra, rng: np.random.Generator, dim_max: int = 24, max_gens: int = 3, max_rels: int = 3
) -> Module:
    """随机模：随机表示矩阵的余核"""
    pres = random_presentation(ring, rng, dim_max, max_gens, max_rels)
    m = from_presentation(pres, f"rand[{pres.rows}x{pres.cols}]")
    logger.debug(f"[Module] random module {m.name} over {ring.name}: dim={m.dim}")
    return m
