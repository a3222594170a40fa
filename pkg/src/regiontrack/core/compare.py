"""
差分比较：在同一条轨迹上运行所有引擎与暴力 oracle，检查它们之间应当成立的关系

- regiontrack-full 的违例集合与判定都等于 oracle
- velodrome ⊆ regiontrack-full ⊆ naive-blame（按 (线程, 事务序号) 比较）
- 所有引擎的轨迹判定一致
- regiontrack-atomicity 的违例集合与 regiontrack-full 相同
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

from tqdm import tqdm

from .engines import run_engine
from ..engine.report import Report
from ..oracle.closure import event_closure, oracle_nonserializable, oracle_violations
from ..trace.generator import GenConfig, generate_random
from ..trace.model import Trace


logger = logging.getLogger(__name__)

COMPARED_ENGINES = (
    "regiontrack-full",
    "regiontrack-atomicity",
    "regiontrack-trace",
    "velodrome",
    "aerodrome",
    "naive-blame",
)

# 判定轨迹是否可串行化时需要一致的引擎
VERDICT_ENGINES = ("regiontrack-full", "regiontrack-trace", "velodrome", "aerodrome", "naive-blame")

TxKey = Tuple[str, int]


def _fmt(keys: Set[TxKey]) -> List[str]:
    return [f"{thread}#{ordinal}" for thread, ordinal in sorted(keys)]


@dataclass
class CompareResult:
    """一条轨迹的比较结果"""
    reports: Dict[str, Report]
    oracle_nonserializable: bool
    oracle_violations: Set[TxKey]
    seed: Optional[int] = None
    breaches: List[str] = field(default_factory=list)

    def violations(self, engine: str) -> Set[TxKey]:
        return self.reports[engine].violation_keys()

    @property
    def ok(self) -> bool:
        return not self.breaches

    @property
    def velodrome_missed(self) -> bool:
        """velodrome 的违例集合严格小于 regiontrack-full"""
        return self.violations("velodrome") < self.violations("regiontrack-full")

    @property
    def naive_extra(self) -> bool:
        """naive-blame 的违例集合严格大于 regiontrack-full"""
        return self.violations("naive-blame") > self.violations("regiontrack-full")

    def to_dict(self) -> Dict[str, object]:
        data: Dict[str, object] = {}
        if self.seed is not None:
            data["seed"] = self.seed
        data["oracle"] = {
            "nonserializable": self.oracle_nonserializable,
            "violations": _fmt(self.oracle_violations),
        }
        data["engines"] = {
            name: {
                "non_serializable": report.non_serializable,
                "first_nonser_event": report.first_nonser_event,
                "violations": _fmt(report.violation_keys()),
                "distinct": report.distinct_labels(),
            }
            for name, report in self.reports.items()
        }
        data["relations_hold"] = self.ok
        data["breaches"] = list(self.breaches)
        return data

    def human_lines(self) -> List[str]:
        head = "trace" if self.seed is None else f"seed={self.seed}"
        oracle = "non-serializable" if self.oracle_nonserializable else "serializable"
        lines = [f"{head} oracle={oracle} violations={','.join(_fmt(self.oracle_violations)) or '-'}"]
        for name, report in self.reports.items():
            verdict = "non-serializable" if report.non_serializable else "serializable"
            keys = ",".join(_fmt(report.violation_keys())) or "-"
            lines.append(f"  {name:<22} {verdict:<17} violations={keys}")
        if self.breaches:
            lines.extend(f"  BREACH {breach}" for breach in self.breaches)
        else:
            lines.append("  relations hold")
        return lines


def _check_relations(result: CompareResult):
    breaches = result.breaches
    full = result.violations("regiontrack-full")
    velodrome = result.violations("velodrome")
    naive = result.violations("naive-blame")

    if full != result.oracle_violations:
        breaches.append(
            f"regiontrack-full violations {_fmt(full)} != oracle {_fmt(result.oracle_violations)}")
    if not velodrome <= full:
        breaches.append(f"velodrome {_fmt(velodrome)} not within regiontrack-full {_fmt(full)}")
    if not full <= naive:
        breaches.append(f"regiontrack-full {_fmt(full)} not within naive-blame {_fmt(naive)}")
    atomicity = result.violations("regiontrack-atomicity")
    if atomicity != full:
        breaches.append(
            f"regiontrack-atomicity violations {_fmt(atomicity)} != regiontrack-full {_fmt(full)}")
    for name in VERDICT_ENGINES:
        verdict = result.reports[name].non_serializable
        if verdict != result.oracle_nonserializable:
            breaches.append(
                f"{name} verdict {verdict} != oracle {result.oracle_nonserializable}")


def compare_trace(trace: Trace, limit: Optional[int] = None, seed: Optional[int] = None,
                  threads_hint: int = 0) -> CompareResult:
    """运行所有引擎与 oracle；关系不成立时记录在 breaches 中（不抛异常）"""
    closure = event_closure(trace, limit)
    reports = {name: run_engine(name, trace, threads_hint=threads_hint) for name in COMPARED_ENGINES}
    result = CompareResult(
        reports=reports,
        oracle_nonserializable=oracle_nonserializable(trace, limit, closure),
        oracle_violations=oracle_violations(trace, limit, closure),
        seed=seed,
    )
    _check_relations(result)
    for breach in result.breaches:
        logger.warning("关系不成立%s: %s", "" if seed is None else f" (seed {seed})", breach)
    return result


@dataclass
class CompareSummary:
    """随机差分比较的汇总；results 按种子排序"""
    results: List[CompareResult]
    config: GenConfig

    @property
    def failures(self) -> List[CompareResult]:
        return [r for r in self.results if not r.ok]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, object]:
        results = self.results
        return {
            "traces": len(results),
            "nonserializable": sum(r.oracle_nonserializable for r in results),
            "velodrome_missed": sum(r.velodrome_missed for r in results),
            "naive_extra": sum(r.naive_extra for r in results),
            "relations_hold": self.ok,
            "failures": [r.to_dict() for r in self.failures],
        }

    def human_lines(self) -> List[str]:
        data = self.to_dict()
        lines = [
            f"traces={data['traces']} nonserializable={data['nonserializable']} "
            f"velodrome_missed={data['velodrome_missed']} naive_extra={data['naive_extra']}"
        ]
        for failure in self.failures:
            lines.extend(failure.human_lines())
        lines.append("relations hold" if self.ok else f"{len(self.failures)} trace(s) breach relations")
        return lines


def compare_random(config: GenConfig, seeds: Iterable[int], limit: Optional[int] = None,
                   workers: int = 1, show_progress: bool = False) -> CompareSummary:
    """对一段种子区间逐个生成随机轨迹并比较；每个任务使用独立的引擎实例"""
    seeds = list(seeds)

    def run(seed: int) -> CompareResult:
        return compare_trace(generate_random(config, seed), limit, seed=seed)

    progress = tqdm(total=len(seeds), desc="compare", unit="trace", disable=not show_progress)
    results: List[CompareResult] = []
    with progress:
        if workers <= 1:
            for seed in seeds:
                results.append(run(seed))
                progress.update(1)
        else:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                for result in executor.map(run, seeds):
                    results.append(result)
                    progress.update(1)

    results.sort(key=lambda r: r.seed)
    summary = CompareSummary(results, config)
    logger.info("随机比较完成: %d 条轨迹, %d 条不成立", len(results), len(summary.failures))
    return summary
