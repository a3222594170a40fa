"""
朴素归咎引擎：维护精确的事件提升 THB 图（所有冲突对都连边并累计重数），
一旦出现经过当前事务的环就归咎包含当前事件的事务。

对轨迹判定是完备的；对事务归咎是不可靠的（会产生误报），
其违例集合总是包含 RegionTrack 的违例集合。
"""

from typing import Dict, FrozenSet, List, Optional

from .graph import TxKey
from .velodrome import GraphEngine, _Source
from ..engine.report import Report
from ..trace.model import Event, EventKind, Trace, effective_events


class NaiveBlameEngine(GraphEngine):
    name = "naive-blame"

    def __init__(self, excluded_labels: Optional[FrozenSet[str]] = None):
        super().__init__(keep_first=False, excluded_labels=excluded_labels)
        # 每个变量/锁上各事务最近一次访问的事件序号
        self.writes: Dict[str, Dict[TxKey, int]] = {}
        self.reads: Dict[str, Dict[TxKey, int]] = {}
        self.lock_ops: Dict[str, Dict[TxKey, int]] = {}

    def _collect(self, table: Dict[TxKey, int], t: int, sources: List[_Source]):
        for key, index in list(table.items()):
            if key not in self.graph:
                del table[key]
            elif key[0] != t:
                sources.append(_Source(key, key[0], index))

    def handle_access(self, t: int, event: Event):
        key = self.current[t]
        index = event.index
        x = event.operand
        sources: List[_Source] = []

        if event.kind is EventKind.READ:
            self._collect(self.writes.setdefault(x, {}), t, sources)
            self.reads.setdefault(x, {})[key] = index
        elif event.kind is EventKind.WRITE:
            self._collect(self.writes.setdefault(x, {}), t, sources)
            self._collect(self.reads.setdefault(x, {}), t, sources)
            self.writes[x][key] = index
        else:
            self._collect(self.lock_ops.setdefault(x, {}), t, sources)
            self.lock_ops[x][key] = index

        for source in sources:
            if self.graph.add_edge(source.node, key, source.event, index):
                self.report.stats.joins += 1

        for source in sorted(sources, key=lambda s: (s.event, s.thread)):
            if self.graph.reachable(key, source.node):
                self.report.mark_nonserializable(index)
                self.blame(t, source, index)
                break


def naive_blame_check(trace: Trace, excluded_labels: Optional[FrozenSet[str]] = None) -> Report:
    engine = NaiveBlameEngine(excluded_labels)
    return engine.feed(effective_events(trace.events, engine.excluded_labels))
