"""
引擎注册表：按名称运行 RegionTrack 各模式及比较引擎
"""

from typing import Callable, Dict, FrozenSet, Iterable, Optional

from .errors import ConfigError
from ..comparators.aerodrome import aerodrome_check
from ..comparators.naive_blame import naive_blame_check
from ..comparators.velodrome import velodrome_check
from ..engine.checker import AnalysisMode, analyze
from ..engine.report import Report
from ..trace.model import Trace


EngineRunner = Callable[[Trace, FrozenSet[str], int], Report]


def _regiontrack(mode: AnalysisMode) -> EngineRunner:
    def run(trace: Trace, excluded: FrozenSet[str], threads_hint: int) -> Report:
        return analyze(trace, mode, excluded_labels=excluded, threads_hint=threads_hint)
    return run


ENGINES: Dict[str, EngineRunner] = {
    "regiontrack-full": _regiontrack(AnalysisMode.FULL),
    "regiontrack-atomicity": _regiontrack(AnalysisMode.ATOMICITY_ONLY),
    "regiontrack-trace": _regiontrack(AnalysisMode.TRACE_ONLY),
    "velodrome": lambda trace, excluded, _hint: velodrome_check(trace, excluded),
    "aerodrome": lambda trace, excluded, _hint: aerodrome_check(trace, excluded),
    "naive-blame": lambda trace, excluded, _hint: naive_blame_check(trace, excluded),
}

# 能报告事务违例的引擎（可用于迭代精化）
VIOLATION_ENGINES = ("regiontrack-full", "regiontrack-atomicity", "velodrome", "naive-blame")


def run_engine(name: str, trace: Trace, excluded_labels: Optional[Iterable[str]] = None,
               threads_hint: int = 0) -> Report:
    runner = ENGINES.get(name)
    if runner is None:
        raise ConfigError(f"unknown engine: {name}")
    return runner(trace, frozenset(excluded_labels or ()), threads_hint)
