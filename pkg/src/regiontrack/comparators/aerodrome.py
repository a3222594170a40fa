"""
AeroDrome 风格的比较引擎（只判定轨迹）

事件级向量时钟跟踪；事务结束时遍历其它线程、所有变量的写/读时钟以及所有锁时钟，
凡是满足 V(tx.begin) ⊑ clock 的实体都并入 V(t)。跨线程 join 时若
V(tx.begin) ⊑ V(e_x) 则报告不可串行化轨迹。违例列表恒为空。
"""

from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from ..clock.vector_clock import VectorClock
from ..core.errors import TraceStructureError
from ..engine.report import Report
from ..trace.model import UNARY_LABEL, Event, EventKind, Trace, effective_events


class AeroDromeEngine:
    name = "aerodrome"

    def __init__(self, excluded_labels: Optional[FrozenSet[str]] = None):
        self.excluded_labels = frozenset(excluded_labels or ())
        self.report = Report(engine=self.name)
        self.thread_names: List[str] = []
        self._ids: Dict[str, int] = {}
        self.C: List[VectorClock] = []
        self.begin: List[Optional[VectorClock]] = []
        self.labels: List[Optional[str]] = []
        # 变量与锁按首次出现顺序遍历
        self.W: Dict[str, Tuple[VectorClock, int]] = {}
        self.R: Dict[str, Dict[int, VectorClock]] = {}
        self.L: Dict[str, Tuple[VectorClock, int]] = {}
        self.live = 0
        self.counters = {
            "end_events": 0,
            "thread_traversals": 0,
            "variable_traversals": 0,
            "lock_traversals": 0,
            "end_joins": 0,
            "memory_locations": 0,
            "locks": 0,
        }

    def _thread(self, name: str) -> int:
        t = self._ids.get(name)
        if t is None:
            t = len(self.thread_names)
            self._ids[name] = t
            self.thread_names.append(name)
            self.C.append(VectorClock(size=t + 1))
            self.begin.append(None)
            self.labels.append(None)
        return t

    def on_event(self, event: Event):
        t = self._thread(event.thread)
        kind = event.kind
        if kind.is_boundary:
            if event.operand in self.excluded_labels:
                return
            if kind is EventKind.BEGIN:
                if self.begin[t] is not None:
                    raise TraceStructureError(event.index, "nested-begin")
                self._begin(t, event.operand)
            else:
                if self.begin[t] is None:
                    raise TraceStructureError(event.index, "end-without-begin")
                if self.labels[t] != event.operand:
                    raise TraceStructureError(event.index, "label-mismatch")
                self._end(t, event.index)
            return

        unary = self.begin[t] is None
        if unary:
            self._begin(t, UNARY_LABEL)

        x = event.operand
        index = event.index
        if kind is EventKind.READ:
            last = self.W.get(x)
            if last is not None and last[1] != t:
                self._check_and_get(t, last[0], index)
            self.R.setdefault(x, {})[t] = self.C[t].copy()
        elif kind is EventKind.WRITE:
            last = self.W.get(x)
            if last is not None and last[1] != t:
                self._check_and_get(t, last[0], index)
            for reader, clock in self.R.get(x, {}).items():
                if reader != t:
                    self._check_and_get(t, clock, index)
            self.W[x] = (self.C[t].copy(), t)
        elif kind is EventKind.ACQUIRE:
            last = self.L.get(x)
            if last is not None and last[1] != t:
                self._check_and_get(t, last[0], index)
        else:
            self.L[x] = (self.C[t].copy(), t)

        if unary:
            self._end(t, index)

    def _begin(self, t: int, label: str):
        clock = self.C[t]
        clock.increment(t)
        self.begin[t] = clock.copy()
        self.labels[t] = label
        stats = self.report.stats
        stats.transactions += 1
        self.live += 1
        stats.max_live_nodes = max(stats.max_live_nodes, self.live)

    def _check_and_get(self, t: int, clock: VectorClock, index: int):
        if self.begin[t].leq(clock):
            self.report.mark_nonserializable(index)
        self.C[t].join_with(clock)
        self.report.stats.joins += 1

    def _absorb(self, begin: VectorClock, mine: VectorClock, target: VectorClock) -> bool:
        if begin.leq(target):
            target.join_with(mine)
            self.counters["end_joins"] += 1
            return True
        return False

    def _end(self, t: int, index: int):
        """事务结束时的遍历：线程、变量（写时钟与各线程读时钟）、锁。

        线程时钟的更新与访问时的 join 一样做检查：若线程 u 的活动事务已经 ⇝ 当前事务，
        而当前事务又 ⇝ u 的时钟，则轨迹不可串行化。
        """
        begin = self.begin[t]
        mine = self.C[t]
        counters = self.counters
        counters["end_events"] += 1

        for u, clock in enumerate(self.C):
            if u == t:
                continue
            counters["thread_traversals"] += 1
            if begin.leq(clock):
                other = self.begin[u]
                if other is not None and other.leq(mine):
                    self.report.mark_nonserializable(index)
                clock.join_with(mine)
                counters["end_joins"] += 1
        for x, (clock, _) in self.W.items():
            counters["variable_traversals"] += 1
            self._absorb(begin, mine, clock)
            for read_clock in self.R.get(x, {}).values():
                counters["variable_traversals"] += 1
                self._absorb(begin, mine, read_clock)
        for x, readers in self.R.items():
            if x in self.W:
                continue
            for read_clock in readers.values():
                counters["variable_traversals"] += 1
                self._absorb(begin, mine, read_clock)
        for clock, _ in self.L.values():
            counters["lock_traversals"] += 1
            self._absorb(begin, mine, clock)

        self.begin[t] = None
        self.labels[t] = None
        self.live -= 1

    def feed(self, events: Iterable[Event]) -> Report:
        for event in events:
            self.on_event(event)
        self.counters["memory_locations"] = len(set(self.W) | set(self.R))
        self.counters["locks"] = len(self.L)
        self.report.counters = dict(self.counters)
        return self.report


def aerodrome_check(trace: Trace, excluded_labels: Optional[FrozenSet[str]] = None) -> Report:
    engine = AeroDromeEngine(excluded_labels)
    return engine.feed(effective_events(trace.events, engine.excluded_labels))
