"""
RegionTrack - 在线事务原子性与可串行化检查器

逐事件消费多线程执行轨迹，报告不可串行化轨迹与违反原子性的事务；
附带暴力 oracle、Velodrome/AeroDrome/naive-blame 比较引擎和迭代精化驱动。
"""

__version__ = "0.1.0"
__description__ = "Online transactional atomicity and serializability checker"

from .core.config import CheckerConfig, load_config
from .core.errors import RegionTrackError
from .core.runner import RegionTrackRunner
from .engine.checker import AnalysisMode, RegionTrackAnalyzer, analyze
from .engine.report import Report, Violation
from .trace.model import Event, EventKind, Trace
from .trace.parser import parse_trace, serialize_trace

__all__ = [
    "RegionTrackRunner",
    "CheckerConfig",
    "load_config",
    "RegionTrackError",
    "AnalysisMode",
    "RegionTrackAnalyzer",
    "analyze",
    "Report",
    "Violation",
    "Event",
    "EventKind",
    "Trace",
    "parse_trace",
    "serialize_trace",
]
