# encoding:utf-8
"""
stabmod 配置管理模块
"""

import json
import logging
import os
from typing import Any, Dict, Optional


# 默认配置
DEFAULT_CONFIG = {
    # 基础域
    "p": 101,  # 素数模数，p = 2 也必须可用

    # ξ 序列
    "n_max": 12,  # 默认计算到 ξ(n_max, M)
    "plateau_width": 4,  # 启发式平台宽度 W
    "xi_method": "syzygy",  # syzygy: 按定义计算 V_n；counit: 经余单位 ψ^n 计算

    # 资源预算
    "dim_budget": 20000,  # 自由分解中单步允许的最大环境维数 β_i·d
    "entry_budget": 60_000_000,  # 单个线性方程组允许的最大矩阵元素个数

    # 随机性
    "seed": 0,
    "iso_samples": 64,  # 同构判定的随机采样次数
    "iso_exhaustive_limit": 4096,  # p^dim Hom 不超过该值时穷举

    # 普查
    "census_count": 20,
    "census_dim_max": 24,
    "census_n_max": 4,  # 普查中每个模的 ξ 序列长度
    "workers": 1,  # 普查并行进程数

    # 服务配置
    "host": "127.0.0.1",
    "port": 8080,

    # 日志配置
    "debug": False,
    "log_level": "WARNING",
    "log_file": "",
}


class Config(dict):
    """配置类，支持字典式访问"""

    def __init__(self, d: Optional[Dict[str, Any]] = None):
        super().__init__()
        if d is None:
            d = {}
        for k, v in DEFAULT_CONFIG.items():
            self[k] = v
        for k, v in d.items():
            if k in DEFAULT_CONFIG:
                self[k] = v
            else:
                logging.warning(f"[Config] Unknown config key: {k}")

    def get(self, key, default=None):
        try:
            return self[key]
        except KeyError:
            return default

    def copy_with(self, **overrides) -> "Config":
        """复制一份配置并覆盖部分键（值为 None 的键忽略）"""
        c = Config(dict(self))
        for k, v in overrides.items():
            if v is not None:
                c[k] = v
        return c


# 全局配置实例
_config = Config()

_INT_KEYS = {
    "p",
    "n_max",
    "plateau_width",
    "dim_budget",
    "entry_budget",
    "seed",
    "workers",
    "port",
}


def load_config(config_path: str = "config.json") -> Config:
    """
    加载配置：配置文件 → 环境变量 → 日志级别
    :param config_path: JSON 配置文件路径，不存在时使用默认配置
    """
    global _config

    if os.path.exists(config_path):
        try:
            with open(config_path, "r", encoding="utf-8") as f:
                _config = Config(json.load(f))
            logging.info(f"[Config] Loaded from {config_path}")
        except Exception as e:
            logging.error(f"[Config] Error loading {config_path}: {e}")
            _config = Config()
    else:
        logging.debug(f"[Config] {config_path} not found, using default config")
        _config = Config()

    env_mappings = {
        "STABMOD_P": "p",
        "STABMOD_N_MAX": "n_max",
        "STABMOD_PLATEAU_WIDTH": "plateau_width",
        "STABMOD_DIM_BUDGET": "dim_budget",
        "STABMOD_SEED": "seed",
        "STABMOD_XI_METHOD": "xi_method",
        "STABMOD_WORKERS": "workers",
        "STABMOD_HOST": "host",
        "STABMOD_PORT": "port",
        "STABMOD_DEBUG": "debug",
        "STABMOD_LOG_LEVEL": "log_level",
        "STABMOD_LOG_FILE": "log_file",
    }

    for env_key, config_key in env_mappings.items():
        value = os.environ.get(env_key)
        if value is not None:
            if config_key in _INT_KEYS:
                value = int(value)
            elif config_key == "debug":
                value = value.lower() in ["true", "1", "yes"]
            _config[config_key] = value
            logging.info(f"[Config] Override {config_key} from environment variable {env_key}")

    if _config["xi_method"] not in ("syzygy", "counit"):
        logging.warning(f"[Config] Unknown xi_method {_config['xi_method']}, using syzygy")
        _config["xi_method"] = "syzygy"

    return _config


def get_config() -> Config:
    """获取全局配置实例"""
    return _config


def set_config(config: Config):
    """替换全局配置（CLI 参数覆盖、测试使用）"""
    global _config
    _config = config


def save_config(config: Config, config_path: str = "config.json"):
    """保存配置到文件"""
    try:
        with open(config_path, "w", encoding="utf-8") as f:
            json.dump(dict(config), f, ensure_ascii=False, indent=2)
        logging.info(f"[Config] Saved to {config_path}")
    except Exception as e:
        logging.error(f"[Config] Error saving config: {e}")
