# encoding:utf-8
"""
报告类型定义，CLI 与 HTTP 接口共用
"""

import json
from enum import Enum, IntEnum
from typing import Any, Optional

from common.errors import EngineError


class ExitCode(IntEnum):
    """进程退出码"""
    OK = 0
    FAILURE = 1          # 引擎自检失败、前提不成立等
    PARSE = 2            # 输入文件无法解析
    RING_INVALID = 3     # 环校验失败
    BUDGET = 4           # 超出维数预算
    NOT_IN_CATEGORY = 5  # 不属于 A_n / E_n / H_n


class ReportType(Enum):
    """报告类型"""
    TABLE = 1   # 人类可读表格
    JSON = 2    # 机器可读结果
    ERROR = 3   # 错误信息
    INFO = 4    # 提示信息


class Report:
    """
    一次命令的输出
    payload 为 JSON 可序列化对象，text 为表格文本
    """

    def __init__(self, type: ReportType, payload: Any = None, text: str = "", exit_code: int = ExitCode.OK):
        self.type = type
        self.payload = payload
        self.text = text
        self.exit_code = int(exit_code)

    @classmethod
    def from_error(cls, error: EngineError) -> "Report":
        return cls(ReportType.ERROR, error.to_dict(), str(error), getattr(error, "exit_code", ExitCode.FAILURE))

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.payload, ensure_ascii=False, indent=indent)

    def http_status(self) -> int:
        if self.exit_code == ExitCode.OK:
            return 200
        if self.exit_code in (ExitCode.PARSE, ExitCode.RING_INVALID):
            return 400
        if self.exit_code in (ExitCode.NOT_IN_CATEGORY, ExitCode.BUDGET):
            return 422
        return 500

    def __str__(self):
        return f"Report(type={self.type}, exit_code={self.exit_code})"
