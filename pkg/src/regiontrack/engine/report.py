"""
分析结果报告及其 JSON 渲染

JSON 字段顺序固定，这是确定性输出的约定。
"""

import json
from collections import Counter
from typing import Any, Dict, List, Optional, Set, Tuple

from pydantic import BaseModel, Field


class Violation(BaseModel):
    """一次动态事务原子性违例"""
    event: int
    thread: str
    label: str
    ordinal: int
    source_thread: str

    @property
    def key(self) -> Tuple[str, int]:
        return (self.thread, self.ordinal)


class ReportStats(BaseModel):
    joins: int = 0
    subregions: int = 0
    max_live_nodes: int = 0
    transactions: int = 0


class Report(BaseModel):
    engine: Optional[str] = None
    non_serializable: bool = False
    first_nonser_event: Optional[int] = None
    violations: List[Violation] = Field(default_factory=list)
    stats: ReportStats = Field(default_factory=ReportStats)
    # 引擎特有计数器（边数、遍历次数等），只在 stats 命令中输出
    counters: Dict[str, int] = Field(default_factory=dict)

    def mark_nonserializable(self, event: int):
        """判定一旦成立便锁存；只记录最早的触发事件"""
        if not self.non_serializable:
            self.non_serializable = True
            self.first_nonser_event = event

    def add_violation(self, violation: Violation):
        self.violations.append(violation)
        self.mark_nonserializable(violation.event)

    def violation_keys(self) -> Set[Tuple[str, int]]:
        return {v.key for v in self.violations}

    def distinct_labels(self) -> Dict[str, int]:
        """按区域标签汇总动态违例数"""
        return dict(Counter(v.label for v in self.violations))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {}
        if self.engine is not None:
            data["engine"] = self.engine
        data["non_serializable"] = self.non_serializable
        data["first_nonser_event"] = self.first_nonser_event
        data["violations"] = [
            {
                "event": v.event,
                "thread": v.thread,
                "label": v.label,
                "ordinal": v.ordinal,
                "source_thread": v.source_thread,
            }
            for v in self.violations
        ]
        data["stats"] = {
            "joins": self.stats.joins,
            "subregions": self.stats.subregions,
            "max_live_nodes": self.stats.max_live_nodes,
            "transactions": self.stats.transactions,
        }
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def stats_dict(self) -> Dict[str, int]:
        data = self.to_dict()["stats"]
        data.update(sorted(self.counters.items()))
        return data

    def human_lines(self) -> List[str]:
        """面向 diff 的文本输出：每个违例一行"""
        verdict = "non-serializable" if self.non_serializable else "serializable"
        head = f"verdict={verdict}"
        if self.engine:
            head = f"engine={self.engine} {head}"
        if self.first_nonser_event is not None:
            head += f" first={self.first_nonser_event}"
        lines = [head]
        for v in self.violations:
            lines.append(
                f"violation event={v.event} thread={v.thread} label={v.label} "
                f"ordinal={v.ordinal} source={v.source_thread}")
        distinct = self.distinct_labels()
        if distinct:
            lines.append("distinct " + " ".join(f"{label}={count}" for label, count in distinct.items()))
        return lines
