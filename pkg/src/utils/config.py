"""配置管理模块"""
import os
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv
from loguru import logger

from src.core.errors import InputError

LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")


class Config:
    """配置管理类

    优先级：命令行参数 > 环境变量 > config.yaml > 内置默认值。
    """

    def __init__(self, config_file: Optional[Path] = None):
        # 打包后的可执行文件使用其所在目录，开发模式使用项目根目录
        if getattr(sys, 'frozen', False):
            self.root_dir = Path(sys.executable).parent
        else:
            self.root_dir = Path(__file__).parent.parent.parent

        self.env_file = self.root_dir / ".env"
        if self.env_file.exists():
            load_dotenv(self.env_file)
            logger.debug("已加载环境变量")

        override = os.getenv("TANHSPEC_CONFIG")
        if config_file is not None:
            self.config_file = Path(config_file)
        elif override:
            self.config_file = Path(override)
        else:
            self.config_file = self.root_dir / "config.yaml"

        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """加载YAML配置文件"""
        try:
            with open(self.config_file, 'r', encoding='utf-8') as f:
                config = yaml.safe_load(f) or {}
                logger.debug(f"配置文件加载成功: {self.config_file}")
                return config
        except (OSError, yaml.YAMLError) as e:
            logger.error(f"配置文件加载失败: {e}")
            return {}

    def get(self, key: str, default: Any = None) -> Any:
        """获取配置项（支持点号路径）"""
        keys = key.split('.')
        value = self.config
        for k in keys:
            if isinstance(value, dict):
                value = value.get(k)
            else:
                return default
        return value if value is not None else default

    def _typed(self, key: str, default: Any, cast):
        """读取并转换数值项；无法转换时抛 InputError"""
        value = self.get(key, default)
        try:
            return cast(value)
        except (TypeError, ValueError):
            raise InputError(f"config value {key} = {value!r} is not a valid {cast.__name__}")

    def get_env(self, key: str, default: str = "") -> str:
        """获取环境变量"""
        return os.getenv(key, default)

    @property
    def app_name(self) -> str:
        return self.get("app.name", "tanhspec")

    @property
    def default_alpha(self) -> float:
        return self._typed("defaults.alpha", -0.5, float)

    @property
    def default_beta(self) -> float:
        return self._typed("defaults.beta", -0.5, float)

    @property
    def default_mode(self) -> str:
        return str(self.get("defaults.mode", "full"))

    @property
    def default_n(self) -> int:
        return self._typed("defaults.n", 64, int)

    @property
    def default_format(self) -> str:
        return str(self.get("defaults.format", "csv"))

    @property
    def default_points(self) -> str:
        """x 采样点（a:b:n 或逗号列表）"""
        return str(self.get("defaults.points", "-5:5:101"))

    @property
    def default_xi_points(self) -> str:
        """ξ 采样点"""
        return str(self.get("fourier.points", "-8:8:33"))

    @property
    def default_m_list(self) -> str:
        return str(self.get("defaults.m_list", "0,1,2,3,4"))

    @property
    def solve_bandwidth(self) -> int:
        return self._typed("solve.bandwidth", 8, int)

    @property
    def rank_tolerance(self) -> float:
        return self._typed("solve.rank_tolerance", 1e-13, float)

    @property
    def residual_tolerance(self) -> float:
        return self._typed("solve.residual_tolerance", 1e-9, float)

    @property
    def xi_max(self) -> float:
        """超过此 |ξ| 时 Fourier 变换给出警告"""
        return self._typed("fourier.xi_max", 60.0, float)

    @property
    def log_level(self) -> str:
        """日志级别（环境变量 TANHSPEC_LOG_LEVEL 优先）"""
        return self.get_env("TANHSPEC_LOG_LEVEL", str(self.get("logging.level", "WARNING"))).upper()

    @property
    def log_to_file(self) -> bool:
        """是否写日志文件（环境变量 TANHSPEC_LOG_FILE=0 可关闭）"""
        env = self.get_env("TANHSPEC_LOG_FILE")
        if env:
            return env.strip().lower() not in ("0", "false", "no", "off")
        return bool(self.get("logging.file", True))

    @property
    def log_dir(self) -> Path:
        path = Path(self.get("logging.dir", "logs"))
        return path if path.is_absolute() else self.root_dir / path

    def validate(self) -> bool:
        """验证配置是否完整"""
        errors = []

        try:
            self._check_values(errors)
        except InputError as e:
            errors.append(str(e))
        if self.log_level not in LOG_LEVELS:
            errors.append(f"不支持的日志级别: {self.log_level}")

        if errors:
            for error in errors:
                logger.error(error)
            return False

        logger.debug("配置验证通过")
        return True

    def _check_values(self, errors: list) -> None:
        if not self.default_alpha > -1.0:
            errors.append(f"defaults.alpha 必须大于 -1，当前为 {self.default_alpha}")
        if not self.default_beta > -1.0:
            errors.append(f"defaults.beta 必须大于 -1，当前为 {self.default_beta}")
        if self.default_mode not in ("full", "half"):
            errors.append(f"defaults.mode 只能是 full 或 half，当前为 {self.default_mode}")
        if self.default_n < 1:
            errors.append(f"defaults.n 必须为正整数，当前为 {self.default_n}")
        if self.default_format not in ("csv", "json"):
            errors.append(f"defaults.format 只能是 csv 或 json，当前为 {self.default_format}")
        if self.solve_bandwidth < 0:
            errors.append(f"solve.bandwidth 不能为负，当前为 {self.solve_bandwidth}")
        if not self.xi_max > 0.0:
            errors.append(f"fourier.xi_max 必须为正，当前为 {self.xi_max}")


# 全局配置实例
config = Config()
