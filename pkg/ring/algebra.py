# encoding:utf-8
"""
交换 artin 局部代数
由结构常数给出：基 b_0 = 1, b_1..b_{d-1} 张成极大理想 m，剩余域 k = F_p
"""

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from common.errors import ParseError, RingValidationError
from common.logger import logger
from lib.exactla import PrimeField, get_field


@dataclass(frozen=True, eq=False)
class RingElement:
    """环元素：长度 d 的系数向量"""

    ring: "Algebra"
    coeffs: Tuple[int, ...]

    def vector(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    def is_unit(self) -> bool:
        return self.coeffs[0] % self.ring.p != 0

    def __mul__(self, other: "RingElement") -> "RingElement":
        return self.ring.element(self.ring.multiply(self.vector(), other.vector()))

    def __add__(self, other: "RingElement") -> "RingElement":
        return self.ring.element(self.vector() + other.vector())

    def __eq__(self, other) -> bool:
        return isinstance(other, RingElement) and other.ring is self.ring and other.coeffs == self.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self) -> str:
        return self.ring.format_element(self.vector())


class Algebra:
    """
    交换 artin 局部代数 R
    构造时穷举校验单位元、幂零性、交换律、结合律，并预先算好 m 的幂、socle、生成元
    """

    def __init__(
        self,
        field: PrimeField,
        basis_names: Sequence[str],
        table,
        name: str = "",
        symbols: Optional[Dict[str, int]] = None,
        variables: Optional[Sequence[str]] = None,
        relations: Optional[Sequence[Tuple[int, ...]]] = None,
    ):
        """
        :param field: 基域
        :param basis_names: 基的名字，basis_names[0] 为 "1"
        :param table: d×d×d 整数数组，table[i][j] 为 b_i·b_j 的系数向量
        :param symbols: 解析环元素时使用的符号 → 基下标（单项式商环中为变量）
        :param variables: 单项式商环的变量；结构常数给出时为 None
        :param relations: 单项式关系的指数元组
        """
        self.field = field
        self.p = field.p
        self.name = name
        self.basis_names = [str(b) for b in basis_names]
        t = np.asarray(table, dtype=np.int64)
        d = len(self.basis_names)
        if t.shape != (d, d, d):
            raise ParseError(f"multiplication table has shape {t.shape}, expected {(d, d, d)}")
        self.dim = d
        self.table = field.reduce(t)
        self.table.setflags(write=False)
        if symbols is None:
            symbols = {n: i for i, n in enumerate(self.basis_names) if i > 0 and n.isidentifier()}
        self.symbols = dict(symbols)
        self.variables: Optional[List[str]] = list(variables) if variables is not None else None
        self.relations: Optional[List[Tuple[int, ...]]] = (
            [tuple(r) for r in relations] if relations is not None else None
        )

        self._validate()

        # mult[k] 为乘 b_k 的矩阵：mult[k][a, j] = b_k·b_j 的第 a 个系数
        self.mult = np.ascontiguousarray(self.table.transpose(0, 2, 1))
        self.mult.setflags(write=False)

        self.powers = self._compute_powers()
        self.loewy_length = len(self.powers) - 1
        self.generators = self._compute_generators()
        self.socle_basis = self._compute_socle()
        logger.debug(
            f"[Algebra] {self.name or 'ring'} validated: d={d}, ll={self.loewy_length}, "
            f"socle={self.socle_basis.shape[1]}, edim={len(self.generators)}"
        )

    # ---------- 校验 ----------

    def _validate(self):
        d, p, t = self.dim, self.p, self.table
        if d == 0 or self.basis_names[0] != "1":
            raise RingValidationError("unit_row", (0, 0, 0), "basis must start with b_0 = '1'")
        eye = np.eye(d, dtype=np.int64)
        for j in range(d):
            if not np.array_equal(t[0, j], eye[j]) or not np.array_equal(t[j, 0], eye[j]):
                raise RingValidationError("unit_row", (0, j, j), f"b_0 does not act as 1 on b_{j}")
        # m 中元素之积不能有单位分量
        for i in range(1, d):
            for j in range(1, d):
                if t[i, j, 0] % p:
                    raise RingValidationError(
                        "not_nilpotent", (i, j, 0), f"b_{i}*b_{j} has a unit component"
                    )
        bad = np.argwhere(np.any(t != t.transpose(1, 0, 2), axis=2))
        if bad.size:
            i, j = bad[0]
            raise RingValidationError("non_commutative", (i, j, 0), f"b_{i}*b_{j} != b_{j}*b_{i}")
        lhs = np.einsum("ija,alc->ijlc", t, t) % p
        rhs = np.einsum("jla,iac->ijlc", t, t) % p
        bad = np.argwhere(np.any(lhs != rhs, axis=3))
        if bad.size:
            i, j, l = bad[0]
            raise RingValidationError(
                "non_associative", (i, j, l), f"(b_{i}b_{j})b_{l} != b_{i}(b_{j}b_{l})"
            )

    def _compute_powers(self) -> List[np.ndarray]:
        """m^0 = R, m^1 = m, ...，直到 0；m 不幂零时报错"""
        f, d = self.field, self.dim
        powers = [f.eye(d)]
        current = f.eye(d)[:, 1:]
        while True:
            powers.append(current)
            if current.shape[1] == 0:
                return powers
            products = [f.matmul(self.mult_matrix(i), current) for i in range(1, d)]
            nxt = f.column_space(np.hstack(products)) if products else f.zeros(d, 0)
            if nxt.shape[1] >= current.shape[1]:
                t = len(powers) - 1
                raise RingValidationError(
                    "not_nilpotent", (t, current.shape[1], nxt.shape[1]), f"m^{t} = m^{t + 1} != 0"
                )
            current = nxt

    def _compute_generators(self) -> List[int]:
        """选出下标 i ≥ 1 使 b_i 在 m/m^2 中构成基"""
        f = self.field
        if self.dim == 1:
            return []
        m2 = self.powers[2] if len(self.powers) > 2 else f.zeros(self.dim, 0)
        cols = np.hstack([m2, f.eye(self.dim)[:, 1:]])
        return [c - m2.shape[1] + 1 for c in f.independent_columns(cols, start=m2.shape[1])]

    def _compute_socle(self) -> np.ndarray:
        f = self.field
        if self.dim == 1:
            return f.eye(1)
        stacked = np.vstack([self.mult[g] for g in self.generators])
        return f.kernel_basis(stacked)

    # ---------- 元素 ----------

    def mult_matrix(self, k: int) -> np.ndarray:
        return self.mult[k]

    def multiply(self, a, b) -> np.ndarray:
        return np.einsum("i,j,ijk->k", self.field.reduce(a), self.field.reduce(b), self.table) % self.p

    def action_matrix(self, r) -> np.ndarray:
        """乘以 r 的 d×d 矩阵"""
        return np.einsum("k,kab->ab", self.field.reduce(r), self.mult) % self.p

    def element(self, coeffs) -> RingElement:
        v = self.field.reduce(coeffs)
        if v.shape != (self.dim,):
            raise ParseError(f"ring element needs {self.dim} coefficients, got {v.shape}")
        return RingElement(self, tuple(int(c) for c in v))

    def one(self) -> RingElement:
        return self.element(np.eye(self.dim, dtype=np.int64)[0])

    def basis_element(self, i: int) -> RingElement:
        return self.element(np.eye(self.dim, dtype=np.int64)[i])

    def parse_element(self, text: str) -> np.ndarray:
        """
        解析形如 "x + 2*y"、"x^2"、"3" 的环元素字符串
        :return: 系数向量
        """
        syms = {name: sympy.Symbol(name) for name in self.symbols}
        try:
            expr = sympy.sympify(str(text), locals=syms, convert_xor=True)
        except (sympy.SympifyError, SyntaxError, TypeError) as e:
            raise ParseError(f"cannot parse ring element {text!r}: {e}")
        gens = [syms[n] for n in self.symbols]
        unknown = expr.free_symbols - set(gens)
        if unknown:
            raise ParseError(f"unknown symbols {sorted(map(str, unknown))} in {text!r}")
        result = np.zeros(self.dim, dtype=np.int64)
        one = np.eye(self.dim, dtype=np.int64)[0]
        if not gens:
            return self.field.reduce(one * self._coefficient(expr, text))
        try:
            poly = sympy.Poly(expr, *gens)
        except sympy.PolynomialError as e:
            raise ParseError(f"{text!r} is not a polynomial in {list(self.symbols)}: {e}")
        for monom, coeff in poly.terms():
            value = one
            for name, e in zip(self.symbols, monom):
                idx = self.symbols[name]
                for _ in range(e):
                    if idx < 0:
                        value = np.zeros(self.dim, dtype=np.int64)
                    else:
                        value = self.multiply(value, np.eye(self.dim, dtype=np.int64)[idx])
            result = result + self._coefficient(coeff, text) * value
        return self.field.reduce(result)

    def _coefficient(self, c, text: str) -> int:
        c = sympy.Rational(c)
        if c.q % self.p == 0:
            raise ParseError(f"coefficient {c} not defined mod {self.p} in {text!r}")
        return (int(c.p) * self.field.inv(int(c.q))) % self.p

    def format_element(self, v) -> str:
        v = self.field.reduce(v)
        terms = []
        for i, c in enumerate(v):
            if c == 0:
                continue
            name = self.basis_names[i]
            if i == 0:
                terms.append(str(int(c)))
            elif c == 1:
                terms.append(name)
            else:
                terms.append(f"{int(c)}*{name}")
        return " + ".join(terms) if terms else "0"

    # ---------- 环不变量 ----------

    def socle(self) -> np.ndarray:
        return self.socle_basis

    def socle_dim(self) -> int:
        return int(self.socle_basis.shape[1])

    def is_gorenstein(self) -> bool:
        return self.socle_dim() == 1

    def embedding_dimension(self) -> int:
        return len(self.generators)

    def hilbert_function(self) -> List[int]:
        """dim m^t / m^{t+1}"""
        dims = [p.shape[1] for p in self.powers]
        return [dims[t] - dims[t + 1] for t in range(len(dims) - 1)]

    def info(self) -> dict:
        info = {
            "name": self.name,
            "p": self.p,
            "dim": self.dim,
            "basis": self.basis_names,
            "socle_dim": self.socle_dim(),
            "gorenstein": self.is_gorenstein(),
            "loewy_length": self.loewy_length,
            "embedding_dimension": self.embedding_dimension(),
            "hilbert_function": self.hilbert_function(),
        }
        if self.variables is not None:
            info["presentation"] = [_monomial_name(r, self.variables) for r in self.relations or []]
        return info

    def __repr__(self):
        return f"Algebra({self.name or '?'}, p={self.p}, d={self.dim})"


def build_from_structure_constants(data: dict, name: str = "") -> Algebra:
    """
    由结构常数构造代数
    :param data: {"p": int, "basis": [names], "table": [[[int]]]}
    """
    try:
        p = int(data.get("p", 101))
        basis = list(data["basis"])
        table = data["table"]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"structure constants incomplete: {e}")
    return Algebra(get_field(p), basis, table, name=name or data.get("name", ""))


def _parse_monomial(text: str, variables: List[str]) -> Tuple[int, ...]:
    syms = [sympy.Symbol(v) for v in variables]
    try:
        expr = sympy.sympify(str(text), locals=dict(zip(variables, syms)), convert_xor=True)
        poly = sympy.Poly(expr, *syms)
    except (sympy.SympifyError, SyntaxError, TypeError, sympy.PolynomialError) as e:
        raise ParseError(f"cannot parse monomial {text!r}: {e}")
    terms = poly.terms()
    if len(terms) != 1 or terms[0][1] != 1:
        raise ParseError(f"{text!r} is not a monomial")
    return tuple(int(e) for e in terms[0][0])


def _monomial_name(exps: Tuple[int, ...], variables: List[str]) -> str:
    parts = []
    for v, e in zip(variables, exps):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts) if parts else "1"


def build_monomial_quotient(
    variables: Sequence[str], relations: Sequence, p: int = 101, name: str = ""
) -> Algebra:
    """
    单项式商环 F_p[vars]/(relations)
    :param relations: 单项式字符串（"x^2", "x*y"）或指数元组
    """
    variables = [str(v) for v in variables]
    n = len(variables)
    rels = []
    for r in relations:
        if isinstance(r, str):
            rels.append(_parse_monomial(r, variables))
        else:
            exps = tuple(int(e) for e in r)
            if len(exps) != n:
                raise ParseError(f"relation {r} has wrong length")
            rels.append(exps)
    if any(sum(r) == 0 for r in rels):
        raise RingValidationError("not_nilpotent", (0, 0, 0), "relation 1 gives the zero ring")

    # 每个变量都需要一个纯幂关系
    bounds = []
    for i in range(n):
        pure = [r[i] for r in rels if r[i] > 0 and sum(r) == r[i]]
        if not pure:
            raise RingValidationError(
                "infinite_quotient", (i, 0, 0), f"variable {variables[i]} has no pure power relation"
            )
        bounds.append(min(pure))

    def divisible(e):
        return any(all(a >= b for a, b in zip(e, r)) for r in rels)

    standard = [e for e in itertools.product(*[range(b) for b in bounds]) if not divisible(e)]
    standard.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    index = {e: i for i, e in enumerate(standard)}
    d = len(standard)
    table = np.zeros((d, d, d), dtype=np.int64)
    for i, a in enumerate(standard):
        for j, b in enumerate(standard):
            c = tuple(x + y for x, y in zip(a, b))
            if c in index:
                table[i, j, index[c]] = 1
    names = [_monomial_name(e, variables) for e in standard]
    unit = tuple([0] * n)
    symbols = {}
    for i, v in enumerate(variables):
        e = tuple(1 if t == i else 0 for t in range(n))
        # 变量本身落在关系中时在环里为 0
        symbols[v] = index[e] if e in index and e != unit else -1
    return Algebra(get_field(p), names, table, name=name, symbols=symbols, variables=variables, relations=rels)
