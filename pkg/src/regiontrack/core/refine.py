"""
迭代精化驱动

在同一条轨迹上重复分析：每轮把被报告违例的区域标签加入排除集合
（其 begin/end 被忽略，区域内事件成为一元事务），
连续 threshold 轮没有新标签时停止。
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional

from .engines import VIOLATION_ENGINES, run_engine
from .errors import ConfigError, EngineMismatchError
from ..trace.model import UNARY_LABEL, Trace


logger = logging.getLogger(__name__)


@dataclass
class RefinementIteration:
    iteration: int
    excluded: List[str]
    dynamic_violations: int
    distinct: Dict[str, int]
    new_labels: List[str]


@dataclass
class RefinementResult:
    engine: str
    threshold: int
    iterations: List[RefinementIteration] = field(default_factory=list)
    excluded: List[str] = field(default_factory=list)

    @property
    def total_dynamic_violations(self) -> int:
        return sum(it.dynamic_violations for it in self.iterations)

    def to_dict(self) -> Dict[str, object]:
        return {
            "engine": self.engine,
            "threshold": self.threshold,
            "iterations": [
                {
                    "iteration": it.iteration,
                    "excluded": list(it.excluded),
                    "dynamic_violations": it.dynamic_violations,
                    "distinct": dict(it.distinct),
                    "new_labels": list(it.new_labels),
                }
                for it in self.iterations
            ],
            "excluded": list(self.excluded),
        }

    def human_lines(self) -> List[str]:
        lines = [f"engine={self.engine} threshold={self.threshold}"]
        accumulated = 0
        for it in self.iterations:
            accumulated += it.dynamic_violations
            new = ",".join(it.new_labels) or "-"
            lines.append(
                f"iteration={it.iteration} dynamic={it.dynamic_violations} "
                f"accumulated={accumulated} new={new}")
        lines.append("excluded " + (",".join(self.excluded) or "-"))
        return lines


def refine(trace: Trace, engine: str = "regiontrack-full", threshold: int = 2,
           seed_labels: Optional[Iterable[str]] = None, threads_hint: int = 0,
           max_iterations: Optional[int] = None) -> RefinementResult:
    """运行迭代精化，返回逐轮摘要与最终排除的标签（按发现顺序）"""
    if engine not in VIOLATION_ENGINES:
        raise EngineMismatchError(f"engine {engine} cannot report transaction violations")
    if threshold < 1:
        raise ConfigError("refinement threshold must be at least 1")

    excluded: List[str] = list(dict.fromkeys(seed_labels or ()))
    result = RefinementResult(engine, threshold)
    # 每轮至少排除一个新标签，因此总轮数有上界
    limit = max_iterations or len(trace.labels) + threshold + 1
    clean = 0

    while clean < threshold and len(result.iterations) < limit:
        report = run_engine(engine, trace, excluded, threads_hint)
        found = [label for label in dict.fromkeys(v.label for v in report.violations)
                 if label != UNARY_LABEL and label not in excluded]
        iteration = RefinementIteration(
            iteration=len(result.iterations) + 1,
            excluded=list(excluded),
            dynamic_violations=len(report.violations),
            distinct=report.distinct_labels(),
            new_labels=found,
        )
        result.iterations.append(iteration)
        logger.info("精化第 %d 轮: %d 个动态违例, 新标签 %s",
                    iteration.iteration, iteration.dynamic_violations, found or "-")
        if found:
            excluded.extend(found)
            clean = 0
        else:
            clean += 1

    result.excluded = excluded
    return result
