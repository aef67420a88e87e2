# encoding:utf-8
"""
素域 F_p 上的精确稠密线性代数
矩阵一律为 numpy int64 数组，元素约化到 [0, p)
消元采用确定性选主元（最左列、最小行号），相同输入得到逐位相同的输出
"""

import threading
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import sympy

from common.errors import DimensionMismatchError, ParseError

# p^2 乘以矩阵规模必须留在 int64 范围内
MAX_PRIME = 1 << 16


@dataclass(frozen=True)
class PrimeField:
    """素域 F_p"""

    p: int = 101

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or self.p < 2 or not sympy.isprime(int(self.p)):
            raise ParseError(f"field modulus {self.p} is not prime")
        if self.p >= MAX_PRIME:
            raise ParseError(f"field modulus {self.p} too large (must be < {MAX_PRIME})")

    # ---------- 基本运算 ----------

    def reduce(self, m) -> np.ndarray:
        """约化到 [0, p)"""
        return np.mod(np.asarray(m, dtype=np.int64), self.p)

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, -1, self.p)

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def matmul(self, *ms) -> np.ndarray:
        """依次相乘并约化"""
        out = np.asarray(ms[0], dtype=np.int64)
        for m in ms[1:]:
            m = np.asarray(m, dtype=np.int64)
            if out.shape[-1] != m.shape[0]:
                raise DimensionMismatchError(f"cannot multiply {out.shape} by {m.shape}")
            out = (out @ m) % self.p
        return out

    def random_matrix(self, rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
        return rng.integers(0, self.p, size=(rows, cols), dtype=np.int64)

    # ---------- 消元 ----------

    def rref(self, m, ncols: Optional[int] = None) -> Tuple[np.ndarray, List[int]]:
        """
        Gauss-Jordan 约化行阶梯形
        :param m: 矩阵
        :param ncols: 只在前 ncols 列中选主元（增广矩阵时使用）
        :return: (约化后的矩阵, 主元列下标)
        """
        a = self.reduce(m).copy()
        if a.ndim != 2:
            raise DimensionMismatchError(f"expected a matrix, got shape {a.shape}")
        rows, cols = a.shape
        limit = cols if ncols is None else ncols
        p = self.p
        pivots: List[int] = []
        r = 0
        for c in range(limit):
            if r >= rows:
                break
            nz = np.flatnonzero(a[r:, c])
            if nz.size == 0:
                continue
            piv = r + int(nz[0])
            if piv != r:
                a[[r, piv]] = a[[piv, r]]
            a[r, c:] = (a[r, c:] * self.inv(a[r, c])) % p
            col = a[:, c].copy()
            col[r] = 0
            others = np.flatnonzero(col)
            if others.size:
                a[others, c:] = (a[others, c:] - np.outer(col[others], a[r, c:])) % p
            pivots.append(c)
            r += 1
        return a, pivots

    def rank(self, m) -> int:
        m = np.asarray(m)
        if m.size == 0:
            return 0
        return len(self.rref(m)[1])

    def kernel_basis(self, m) -> np.ndarray:
        """
        右零空间的一组基（按列）
        :return: cols × (cols - rank) 矩阵，自由变量按列号递增排列
        """
        m = np.asarray(m)
        cols = m.shape[1]
        if m.shape[0] == 0:
            return self.eye(cols)
        r, pivots = self.rref(m)
        free = [c for c in range(cols) if c not in set(pivots)]
        k = self.zeros(cols, len(free))
        for t, f in enumerate(free):
            k[f, t] = 1
            for i, pc in enumerate(pivots):
                k[pc, t] = (-r[i, f]) % self.p
        return k

    def solve(self, m, b) -> Optional[np.ndarray]:
        """
        求 m·x = b 的一个解，自由变量取 0
        :param b: 向量或矩阵（多个右端项）
        :return: 解；无解时返回 None
        """
        m = self.reduce(m)
        b = self.reduce(b)
        vector = b.ndim == 1
        if vector:
            b = b.reshape(-1, 1)
        if m.shape[0] != b.shape[0]:
            raise DimensionMismatchError(f"row counts differ: {m.shape} vs {b.shape}")
        rows, cols = m.shape
        if b.shape[1] == 0:
            x = self.zeros(cols, 0)
            return x[:, 0] if vector else x
        if rows == 0:
            x = self.zeros(cols, b.shape[1])
            return x[:, 0] if vector else x
        aug, pivots = self.rref(np.hstack([m, b]), ncols=cols)
        rk = len(pivots)
        if np.any(aug[rk:, cols:]):
            return None
        x = self.zeros(cols, b.shape[1])
        for i, pc in enumerate(pivots):
            x[pc] = aug[i, cols:]
        return x[:, 0] if vector else x

    def inverse(self, m) -> np.ndarray:
        m = self.reduce(m)
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"inverse of non-square matrix {m.shape}")
        x = self.solve(m, self.eye(m.shape[0]))
        if x is None:
            raise ZeroDivisionError("matrix is singular")
        return x

    def left_inverse(self, k) -> np.ndarray:
        """列满秩矩阵 k (n×r) 的左逆 L (r×n)，L·k = I"""
        k = self.reduce(k)
        n, r = k.shape
        if r == 0:
            return self.zeros(0, n)
        lt = self.solve(k.T, self.eye(r))
        if lt is None:
            raise DimensionMismatchError("left inverse requested for a rank-deficient matrix")
        return lt.T.copy()

    # ---------- 子空间（以列为基） ----------

    def column_space(self, m) -> np.ndarray:
        """列空间的规范基：m^T 的约化行阶梯形的非零行"""
        m = self.reduce(m)
        if m.ndim != 2:
            raise DimensionMismatchError(f"expected a matrix, got shape {m.shape}")
        if m.shape[1] == 0:
            return self.zeros(m.shape[0], 0)
        r, pivots = self.rref(m.T)
        return r[: len(pivots)].T.copy()

    def independent_columns(self, m, start: int = 0) -> List[int]:
        """从左到右贪心选出线性无关的列，只返回下标 ≥ start 的那些"""
        m = self.reduce(m)
        if m.shape[0] == 0 or m.shape[1] == 0:
            return []
        _, pivots = self.rref(m)
        return [c for c in pivots if c >= start]

    def _check_ambient(self, u: np.ndarray, w: np.ndarray):
        if u.shape[0] != w.shape[0]:
            raise DimensionMismatchError(f"ambient dimensions differ: {u.shape[0]} vs {w.shape[0]}")

    def subspace_sum(self, u, w) -> np.ndarray:
        u, w = self.reduce(u), self.reduce(w)
        self._check_ambient(u, w)
        return self.column_space(np.hstack([u, w]))

    def subspace_intersection(self, u, w) -> np.ndarray:
        u, w = self.reduce(u), self.reduce(w)
        self._check_ambient(u, w)
        u = self.column_space(u)
        w = self.column_space(w)
        if u.shape[1] == 0 or w.shape[1] == 0:
            return self.zeros(u.shape[0], 0)
        k = self.kernel_basis(np.hstack([u, (-w) % self.p]))
        return self.column_space(self.matmul(u, k[: u.shape[1]]))

    def contains(self, u, v) -> bool:
        """v（向量或若干列）是否落在 u 的列空间中"""
        u, v = self.reduce(u), self.reduce(v)
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        self._check_ambient(u, v)
        if not np.any(v):
            return True
        if u.shape[1] == 0:
            return False
        return self.solve(u, v) is not None

    def quotient_dim(self, u, w) -> int:
        """dim (u + w) / w，即 u 在模掉 w 之后的维数"""
        u, w = self.reduce(u), self.reduce(w)
        self._check_ambient(u, w)
        return self.rank(np.hstack([u, w])) - self.rank(w)

    def complement_coordinates(self, u) -> List[int]:
        """u 的规范基中非主元坐标，对应的单位向量张成 u 的补空间"""
        u = self.reduce(u)
        n = u.shape[0]
        if u.shape[1] == 0:
            return list(range(n))
        _, pivots = self.rref(u.T)
        piv = set(pivots)
        return [c for c in range(n) if c not in piv]

    def quotient_map(self, u) -> Tuple[np.ndarray, np.ndarray]:
        """
        商空间 k^n / span(u) 的坐标
        :return: (Q, S)，Q 为 (n-r)×n 的商映射，ker Q = span(u)；S 为 n×(n-r) 的截面，Q·S = I
        """
        u = self.reduce(u)
        n = u.shape[0]
        if u.shape[1] == 0:
            return self.eye(n), self.eye(n)
        e, pivots = self.rref(u.T)
        e = e[: len(pivots)]
        piv = set(pivots)
        nonpiv = [c for c in range(n) if c not in piv]
        q = self.zeros(len(nonpiv), n)
        s = self.zeros(n, len(nonpiv))
        for t, c in enumerate(nonpiv):
            q[t, c] = 1
            s[c, t] = 1
        # 主元坐标 piv_t 处：e_{piv_t} ≡ -Σ e[t, np] e_np (mod span u)
        for t, pc in enumerate(pivots):
            q[:, pc] = (-e[t, nonpiv]) % self.p
        return q, s


_default_fields: Dict[int, PrimeField] = {}
_fields_lock = threading.Lock()


def get_field(p: int) -> PrimeField:
    """按模数缓存 PrimeField"""
    with _fields_lock:
        f = _default_fields.get(p)
        if f is None:
            f = PrimeField(p)
            _default_fields[p] = f
        return f
