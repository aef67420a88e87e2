# encoding:utf-8
"""
引擎异常定义
每个异常携带 CLI 使用的退出码：0 成功，2 解析错误，3 环校验失败，4 超出维数预算，5 不属于所需范畴
"""

from typing import Any, Optional, Tuple


class EngineError(Exception):
    """所有引擎异常的基类"""

    exit_code = 1

    def to_dict(self) -> dict:
        return {"code": self.exit_code, "msg": str(self), "type": type(self).__name__}


class ParseError(EngineError):
    """输入文件或字符串无法解析"""

    exit_code = 2


class RingValidationError(EngineError):
    """
    结构常数不构成交换局部 artin 代数
    :param kind: unit_row | not_nilpotent | non_commutative | non_associative | infinite_quotient
    :param witness: 出错的下标三元组
    """

    exit_code = 3

    def __init__(self, kind: str, witness: Tuple[int, ...], message: str = ""):
        self.kind = kind
        self.witness = tuple(int(w) for w in witness)
        super().__init__(message or f"{kind} (witness {self.witness})")

    def to_dict(self) -> dict:
        d = super().to_dict()
        d.update({"kind": self.kind, "witness": list(self.witness)})
        return d


class BudgetExceededError(EngineError):
    """计算所需的环境维数超过预算"""

    exit_code = 4

    def __init__(self, degree: int, dimension: int, budget: int, what: str = "resolution"):
        self.degree = degree
        self.dimension = dimension
        self.budget = budget
        super().__init__(
            f"{what} at degree {degree} needs ambient dimension {dimension} > budget {budget}"
        )


class NotInCategoryError(EngineError):
    """
    模块不属于 A_n / E_n / H_n
    :param witness: 说明失败原因的文字，例如 "Ext^1(M,R) != 0"
    """

    exit_code = 5

    def __init__(self, category: str, n: int, degree: Optional[int], witness: str):
        self.category = category
        self.n = n
        self.degree = degree
        self.witness = witness
        super().__init__(f"not in {category}_{n}: {witness}")

    def to_dict(self) -> dict:
        d = super().to_dict()
        d.update({"category": self.category, "n": self.n, "degree": self.degree})
        return d


class NotGorensteinError(EngineError):
    """需要 Gorenstein 环"""


class PreconditionError(EngineError):
    """操作的前提条件不成立"""


class EngineCheckError(EngineError):
    """内部自检失败，说明引擎有缺陷"""

    def __init__(self, message: str, detail: Any = None):
        self.detail = detail
        super().__init__(message)


class DimensionMismatchError(EngineError, ValueError):
    """矩阵或子空间维数不匹配"""


class ModuleAxiomError(EngineError):
    """作用矩阵不满足模公理，或映射不是等变的"""


class RingMismatchError(EngineError):
    """两个对象不在同一个环上"""
