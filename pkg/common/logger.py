# encoding:utf-8
"""
日志模块
"""

import logging
import sys
from logging.handlers import RotatingFileHandler
from typing import Optional

# 标记是否已经初始化（避免重复设置）
_logger_initialized = False

_FORMAT = "[%(levelname)s][%(asctime)s][%(filename)s:%(lineno)d] - %(message)s"


def setup_logger(
    name: str = "stabmod", level: int = logging.INFO, log_file: Optional[str] = None
) -> logging.Logger:
    """
    设置日志
    :param name: logger名称
    :param level: 日志级别
    :param log_file: 轮转日志文件路径，为空时只输出到控制台
    :return: logger实例
    """
    global _logger_initialized

    logger = logging.getLogger(name)

    # 如果已经初始化过，只更新日志级别（以及按需补上文件处理器）
    if _logger_initialized:
        logger.setLevel(level)
        for handler in logger.handlers:
            handler.setLevel(level)
        if log_file and not any(isinstance(h, RotatingFileHandler) for h in logger.handlers):
            logger.addHandler(_file_handler(log_file, level))
        return logger

    _logger_initialized = True
    logger.handlers.clear()
    logger.setLevel(level)
    logger.propagate = False

    # 控制台处理器：stdout 留给 JSON 报告
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(logging.Formatter(_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
    logger.addHandler(console_handler)

    if log_file:
        logger.addHandler(_file_handler(log_file, level))

    return logger


def _file_handler(path: str, level: int) -> logging.Handler:
    """文件处理器 (轮转日志，最大10MB，保留5个备份)"""
    handler = RotatingFileHandler(path, maxBytes=10 * 1024 * 1024, backupCount=5, encoding="utf-8")
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
    return handler


# 全局logger实例（默认WARNING，CLI/服务启动时按配置调整）
logger = setup_logger(level=logging.WARNING)
