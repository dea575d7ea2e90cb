"""
配置管理模块

使用 pydantic-settings 管理配置，支持：
- 环境变量 (DOMTEST_ 前缀)
- .env 文件
- YAML 配置文件 (config/params.yaml, config/scenarios/*.yaml)
"""

from pathlib import Path
from typing import Any

import yaml
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from domtest.errors import ConfigError


LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")


def load_yaml_config(file_path: Path) -> dict[str, Any]:
    """加载 YAML 配置文件"""
    if file_path.exists():
        with open(file_path, encoding="utf-8") as f:
            return yaml.safe_load(f) or {}
    return {}


class Settings(BaseSettings):
    """主配置类"""

    # 项目路径
    project_root: Path = Field(
        default_factory=lambda: Path(__file__).parent.parent.parent,
        description="项目根目录",
    )

    config_dir: Path = Field(default=Path("config"), description="配置目录")

    # 日志配置
    log_level: str = Field(default="INFO", description="日志级别")
    log_dir: Path = Field(default=Path("logs"), description="日志目录")
    log_to_file: bool = Field(default=False, description="是否写日志文件")

    # 并行
    threads: int | None = Field(default=None, ge=1, description="bootstrap 线程数（None=全部核心）")

    debug: bool = Field(default=False, description="调试模式")

    model_config = SettingsConfigDict(
        env_prefix="DOMTEST_",
        env_file=".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        extra="ignore",
    )

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, v: str) -> str:
        level = v.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"未知日志级别: {v}，可选 {LOG_LEVELS}")
        return level

    @property
    def abs_config_dir(self) -> Path:
        """配置目录绝对路径"""
        if self.config_dir.is_absolute():
            return self.config_dir
        return self.project_root / self.config_dir

    @property
    def abs_log_dir(self) -> Path:
        """日志目录绝对路径"""
        if self.log_dir.is_absolute():
            return self.log_dir
        return self.project_root / self.log_dir

    @property
    def scenarios_dir(self) -> Path:
        """场景配置目录"""
        return self.abs_config_dir / "scenarios"

    def load_params_config(self) -> dict[str, Any]:
        """加载默认运行参数"""
        return load_yaml_config(self.abs_config_dir / "params.yaml")

    def load_scenario_config(self, name_or_path: str | Path) -> dict[str, Any]:
        """按名称（scenarios 目录下）或路径加载场景配置"""
        path = Path(name_or_path)
        if not path.suffix:
            path = self.scenarios_dir / f"{path}.yaml"
        if not path.exists():
            raise ConfigError(f"场景文件不存在: {path}")
        return load_yaml_config(path)


# 全局配置单例
_settings: Settings | None = None


def get_settings() -> Settings:
    """获取全局配置"""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def init_settings(**kwargs: Any) -> Settings:
    """初始化全局配置（允许覆盖默认值）"""
    global _settings
    _settings = Settings(**kwargs)
    return _settings
