"""
Velodrome 风格的比较引擎

在线构建事务 happens-before 图（每个节点对至多一条边，保留第一条），
新的跨线程边进入当前事务时搜索环：有环即判定轨迹不可串行化，
只有当环按边上记录的首尾事件序号“递增”时才归咎当前事务。
此引擎实现的是上述描述下的模型，而非 Velodrome 的完整工程实现。
"""

import logging
from typing import Dict, FrozenSet, Iterable, List, Optional, Set

from .graph import ThbGraph, TxKey
from ..engine.report import Report, Violation
from ..core.errors import TraceStructureError
from ..trace.model import UNARY_LABEL, Event, EventKind, Trace, effective_events


logger = logging.getLogger(__name__)


class _Source:
    __slots__ = ("node", "thread", "event")

    def __init__(self, node: TxKey, thread: int, event: int):
        self.node = node
        self.thread = thread
        self.event = event


class GraphEngine:
    """Velodrome 与 naive-blame 共用的事务记账：线程登记、begin/end、程序序边、图剪枝"""

    name = "graph"

    def __init__(self, keep_first: bool, excluded_labels: Optional[FrozenSet[str]] = None):
        self.graph = ThbGraph(keep_first=keep_first)
        self.excluded_labels = frozenset(excluded_labels or ())
        self.report = Report(engine=self.name)
        self.thread_names: List[str] = []
        self._ids: Dict[str, int] = {}
        self.current: List[Optional[TxKey]] = []
        self.labels: Dict[TxKey, str] = {}
        self.last: List[Optional[TxKey]] = []
        self.last_event: List[int] = []
        self.ordinals: List[int] = []
        self.live = 0
        self._reported: Set[tuple] = set()

    def _thread(self, name: str) -> int:
        t = self._ids.get(name)
        if t is None:
            t = len(self.thread_names)
            self._ids[name] = t
            self.thread_names.append(name)
            self.current.append(None)
            self.last.append(None)
            self.last_event.append(0)
            self.ordinals.append(0)
        return t

    def on_event(self, event: Event):
        t = self._thread(event.thread)
        kind = event.kind
        if kind.is_boundary:
            if event.operand in self.excluded_labels:
                return
            if kind is EventKind.BEGIN:
                if self.current[t] is not None:
                    raise TraceStructureError(event.index, "nested-begin")
                self._begin(t, event.operand, event.index)
            else:
                key = self.current[t]
                if key is None:
                    raise TraceStructureError(event.index, "end-without-begin")
                if self.labels[key] != event.operand:
                    raise TraceStructureError(event.index, "label-mismatch")
                self.last_event[t] = event.index
                self._end(t)
            return

        unary = self.current[t] is None
        if unary:
            self._begin(t, UNARY_LABEL, event.index)
        self.last_event[t] = event.index
        self.handle_access(t, event)
        if unary:
            self._end(t)

    def _begin(self, t: int, label: str, index: int):
        self.ordinals[t] += 1
        key = (t, self.ordinals[t])
        self.graph.add_node(key)
        self.labels[key] = label
        previous = self.last[t]
        if previous is not None:
            self.graph.add_edge(previous, key, self.last_event[t], index)
        self.current[t] = key
        self.last_event[t] = index
        stats = self.report.stats
        stats.transactions += 1
        self.live += 1
        stats.max_live_nodes = max(stats.max_live_nodes, self.live)

    def _end(self, t: int):
        key = self.current[t]
        self.graph.finish(key)
        self.current[t] = None
        self.last[t] = key
        self.live -= 1
        self.graph.prune()
        for stale in [k for k in self.labels if k not in self.graph and self.current[k[0]] != k]:
            del self.labels[stale]

    def handle_access(self, t: int, event: Event):
        raise NotImplementedError

    def blame(self, t: int, source: _Source, index: int):
        key = self.current[t]
        if (key, source.event) in self._reported:
            return
        self._reported.add((key, source.event))
        self.report.add_violation(Violation(
            event=index,
            thread=self.thread_names[t],
            label=self.labels[key],
            ordinal=key[1],
            source_thread=self.thread_names[source.thread],
        ))

    def feed(self, events: Iterable[Event]) -> Report:
        for event in events:
            self.on_event(event)
        self.report.counters = dict(self.graph.counters, live_graph_nodes=len(self.graph))
        return self.report


class VelodromeEngine(GraphEngine):
    """访问跟踪沿用写后读/读后写/最后写/释放→获取的记账方式"""

    name = "velodrome"

    def __init__(self, excluded_labels: Optional[FrozenSet[str]] = None):
        super().__init__(keep_first=True, excluded_labels=excluded_labels)
        self.W: Dict[str, _Source] = {}
        self.R: Dict[str, Dict[int, _Source]] = {}
        self.L: Dict[str, _Source] = {}

    def handle_access(self, t: int, event: Event):
        key = self.current[t]
        index = event.index
        x = event.operand
        sources: List[_Source] = []

        if event.kind is EventKind.READ:
            last_write = self.W.get(x)
            readers = self.R.setdefault(x, {})
            if last_write is not None and last_write.thread != t and t not in readers:
                sources.append(last_write)
            readers[t] = _Source(key, t, index)
        elif event.kind is EventKind.WRITE:
            readers = self.R.pop(x, None)
            if readers:
                sources.extend(ref for reader, ref in readers.items() if reader != t)
            else:
                last_write = self.W.get(x)
                if last_write is not None and last_write.thread != t:
                    sources.append(last_write)
            self.W[x] = _Source(key, t, index)
        elif event.kind is EventKind.ACQUIRE:
            last_release = self.L.get(x)
            if last_release is not None and last_release.thread != t:
                sources.append(last_release)
        else:
            self.L[x] = _Source(key, t, index)

        for source in sources:
            if not self.graph.add_edge(source.node, key, source.event, index):
                continue
            self.report.stats.joins += 1
            if not self.graph.reachable(key, source.node):
                continue
            self.report.mark_nonserializable(index)
            arrival = self.graph.earliest_arrival(key, source.node)
            if arrival is not None and arrival <= source.event:
                self.blame(t, source, index)
            else:
                logger.debug("事件 %d 处的环非递增，不归咎事务", index)


def velodrome_check(trace: Trace, excluded_labels: Optional[FrozenSet[str]] = None) -> Report:
    engine = VelodromeEngine(excluded_labels)
    return engine.feed(effective_events(trace.events, engine.excluded_labels))
