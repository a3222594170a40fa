"""
RegionTrack 配置管理模块
"""

import os
import json
from pathlib import Path
from typing import Dict, Any, Optional
from dataclasses import dataclass, field, asdict

import yaml

from .errors import ConfigError


ENGINE_NAMES = (
    "regiontrack-full",
    "regiontrack-atomicity",
    "regiontrack-trace",
    "velodrome",
    "aerodrome",
    "naive-blame",
)

OUTPUT_FORMATS = ("json", "human")


@dataclass
class LoggingConfig:
    """日志配置"""
    level: str = "INFO"
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    file_path: Optional[str] = None
    max_bytes: int = 10 * 1024 * 1024  # 10MB
    backup_count: int = 5


@dataclass
class OracleConfig:
    """暴力 oracle 的规模上限"""
    max_closure_events: int = 200
    max_swap_events: int = 12


@dataclass
class GeneratorDefaults:
    """随机轨迹生成的默认参数（CLI 未指定时使用）"""
    threads: int = 3
    events: int = 12
    variables: int = 3
    locks: int = 1
    region_labels: int = 3
    p_region: float = 0.7
    p_close: float = 0.3
    read_weight: float = 4.0
    write_weight: float = 3.0
    acquire_weight: float = 1.0
    release_weight: float = 1.0


@dataclass
class RefineConfig:
    """迭代精化配置"""
    threshold: int = 2


@dataclass
class CompareConfig:
    """差分比较配置"""
    workers: int = 1
    show_progress: bool = True


@dataclass
class CheckerConfig:
    """RegionTrack 主配置"""
    default_engine: str = "regiontrack-full"
    output_format: str = "json"
    threads_hint: int = 0
    debug: bool = False

    # 组件配置
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    generator: GeneratorDefaults = field(default_factory=GeneratorDefaults)
    refine: RefineConfig = field(default_factory=RefineConfig)
    compare: CompareConfig = field(default_factory=CompareConfig)

    def __post_init__(self):
        if self.default_engine not in ENGINE_NAMES:
            raise ConfigError(f"unknown engine: {self.default_engine}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"unknown output format: {self.output_format}")

    @classmethod
    def from_file(cls, config_path: str) -> "CheckerConfig":
        """从配置文件加载配置（JSON 或 YAML）"""
        config_file = Path(config_path)
        if not config_file.exists():
            return cls()

        with open(config_file, 'r', encoding='utf-8') as f:
            if config_file.suffix in ('.yml', '.yaml'):
                config_data = yaml.safe_load(f) or {}
            else:
                config_data = json.load(f)

        return cls.from_dict(config_data)

    @classmethod
    def from_dict(cls, config_data: Dict[str, Any]) -> "CheckerConfig":
        """从字典创建配置"""
        try:
            return cls(
                default_engine=config_data.get('default_engine', 'regiontrack-full'),
                output_format=config_data.get('output_format', 'json'),
                threads_hint=config_data.get('threads_hint', 0),
                debug=config_data.get('debug', False),
                logging=LoggingConfig(**config_data.get('logging', {})),
                oracle=OracleConfig(**config_data.get('oracle', {})),
                generator=GeneratorDefaults(**config_data.get('generator', {})),
                refine=RefineConfig(**config_data.get('refine', {})),
                compare=CompareConfig(**config_data.get('compare', {})),
            )
        except TypeError as e:
            raise ConfigError(f"invalid configuration: {e}") from e

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return asdict(self)

    def save_to_file(self, config_path: str):
        """保存配置到文件"""
        config_file = Path(config_path)
        config_file.parent.mkdir(parents=True, exist_ok=True)

        with open(config_file, 'w', encoding='utf-8') as f:
            if config_file.suffix in ('.yml', '.yaml'):
                yaml.safe_dump(self.to_dict(), f, allow_unicode=True, sort_keys=False)
            else:
                json.dump(self.to_dict(), f, indent=2, ensure_ascii=False)

    @classmethod
    def from_env(cls) -> "CheckerConfig":
        """从环境变量加载配置"""
        config = cls()

        if os.getenv('REGIONTRACK_ENGINE'):
            engine = os.getenv('REGIONTRACK_ENGINE')
            if engine not in ENGINE_NAMES:
                raise ConfigError(f"unknown engine: {engine}")
            config.default_engine = engine
        if os.getenv('REGIONTRACK_FORMAT'):
            fmt = os.getenv('REGIONTRACK_FORMAT')
            if fmt not in OUTPUT_FORMATS:
                raise ConfigError(f"unknown output format: {fmt}")
            config.output_format = fmt

        # 日志配置
        if os.getenv('REGIONTRACK_LOG_LEVEL'):
            config.logging.level = os.getenv('REGIONTRACK_LOG_LEVEL').upper()
        if os.getenv('REGIONTRACK_LOG_FILE'):
            config.logging.file_path = os.getenv('REGIONTRACK_LOG_FILE')

        if os.getenv('REGIONTRACK_MAX_CLOSURE_EVENTS'):
            config.oracle.max_closure_events = int(os.getenv('REGIONTRACK_MAX_CLOSURE_EVENTS'))
        if os.getenv('REGIONTRACK_WORKERS'):
            config.compare.workers = int(os.getenv('REGIONTRACK_WORKERS'))

        return config


def load_config(config_path: Optional[str] = None) -> CheckerConfig:
    """加载配置"""
    if config_path:
        return CheckerConfig.from_file(config_path)

    # 尝试从默认位置加载
    default_config_paths = [
        "config/regiontrack.json",
        "regiontrack.json",
        "regiontrack.yaml",
    ]

    for path in default_config_paths:
        if Path(path).exists():
            return CheckerConfig.from_file(path)

    if any(key.startswith('REGIONTRACK_') for key in os.environ):
        return CheckerConfig.from_env()

    # 使用默认配置
    return CheckerConfig()
