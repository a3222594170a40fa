"""
RegionTrack 在线检查器

按轨迹顺序逐个消费事件：begin/end/r/w/acq/rel 处理、子区域划分、
O(1) 的 checkHB 判定，以及（完整/仅轨迹模式下）事务向量时钟的传播。
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Set, Tuple

from .report import Report, Violation
from .tvc import TransactionalClocks
from ..clock.vector_clock import VectorClock
from ..core.errors import TraceStructureError
from ..trace.model import UNARY_LABEL, Event, EventKind, Trace, effective_events


logger = logging.getLogger(__name__)


class AnalysisMode(Enum):
    ATOMICITY_ONLY = "atomicity"
    TRACE_ONLY = "trace"
    FULL = "full"


class ClockRef(NamedTuple):
    """W(x)/R(t,x)/L(m) 条目：共享（不复制）某个子区域的时钟快照"""
    clock: VectorClock
    thread: int
    event: int


class TransactionNode:
    """一个正在运行的事务"""

    __slots__ = ("label", "begin_clock", "curr_clock", "thread", "ordinal",
                 "begin_event", "reported")

    def __init__(self, label: str, clock: VectorClock, thread: int, begin_event: int):
        self.label = label
        self.begin_clock = clock
        self.curr_clock = clock
        self.thread = thread
        self.ordinal = clock.get(thread)
        self.begin_event = begin_event
        self.reported: Optional[Set[int]] = None

    @property
    def is_unary(self) -> bool:
        return self.label == UNARY_LABEL


@dataclass(frozen=True)
class TvcSnapshot:
    """事务向量时钟轨迹中的一个点；phase 为 direct（直接更新后）或 propagated"""
    event: int
    phase: str
    source_thread: str
    rows: Tuple[Tuple[int, ...], ...]


class RegionTrackAnalyzer:
    """RegionTrack 分析器状态机（非线程安全，一个实例只消费一条事件流）"""

    def __init__(self, mode: AnalysisMode = AnalysisMode.FULL, threads_hint: int = 0,
                 excluded_labels: Optional[FrozenSet[str]] = None,
                 record_clocks: bool = False, record_tvc: bool = False):
        self.mode = mode
        self.excluded_labels = frozenset(excluded_labels or ())
        self._track_tvc = mode is not AnalysisMode.ATOMICITY_ONLY
        self._report_violations = mode is not AnalysisMode.TRACE_ONLY

        self.thread_names: List[str] = []
        self._thread_ids: Dict[str, int] = {}
        size = max(threads_hint, 0)
        self.V: List[VectorClock] = []
        self.C: List[Optional[TransactionNode]] = []
        self.TV: Optional[TransactionalClocks] = TransactionalClocks() if self._track_tvc else None
        self.W: Dict[str, ClockRef] = {}
        self.R: Dict[str, Dict[int, ClockRef]] = {}
        self.L: Dict[str, ClockRef] = {}
        self._hint = size

        self.report = Report()
        self.live_nodes = 0
        self.hb_calls = 0
        # 实际进行的时间戳比较次数，TV 的有效性判断不计入
        self.hb_comparisons = 0

        self.record_clocks = record_clocks
        self.event_clocks: Dict[int, VectorClock] = {}
        self.transaction_begins: Dict[Tuple[int, int], Tuple[int, VectorClock]] = {}
        self.record_tvc = record_tvc and self._track_tvc
        self.tvc_trajectory: List[TvcSnapshot] = []

    # 线程登记
    def _thread(self, name: str) -> int:
        t = self._thread_ids.get(name)
        if t is None:
            t = len(self.thread_names)
            self._thread_ids[name] = t
            self.thread_names.append(name)
            self.V.append(VectorClock(size=max(self._hint, t + 1)))
            self.C.append(None)
            if self.TV is not None:
                self.TV.ensure(t + 1)
        return t

    @property
    def tid(self) -> range:
        return range(len(self.thread_names))

    def on_event(self, event: Event):
        """分发一个事件；区域外的非边界事件包装为一元事务"""
        t = self._thread(event.thread)
        kind = event.kind
        index = event.index

        if kind is EventKind.BEGIN:
            if event.operand in self.excluded_labels:
                return
            self.handle_begin(t, event.operand, index)
            return
        if kind is EventKind.END:
            if event.operand in self.excluded_labels:
                return
            self.handle_end(t, event.operand, index)
            return

        unary = self.C[t] is None
        if unary:
            self._begin(t, UNARY_LABEL, index)

        if kind is EventKind.READ:
            self.handle_read(t, event.operand, index)
        elif kind is EventKind.WRITE:
            self.handle_write(t, event.operand, index)
        elif kind is EventKind.ACQUIRE:
            self.handle_acquire(t, event.operand, index)
        else:
            self.handle_release(t, event.operand, index)

        if self.record_clocks:
            self.event_clocks[index] = self.C[t].curr_clock
        if unary:
            self._end(t)

    def feed(self, events: Iterable[Event]) -> Report:
        for event in events:
            self.on_event(event)
        return self.finish()

    def finish(self) -> Report:
        self.report.counters = {
            "hb_calls": self.hb_calls,
            "hb_comparisons": self.hb_comparisons,
            "threads": len(self.thread_names),
        }
        return self.report

    # begin / end
    def handle_begin(self, t: int, label: str, index: int):
        if self.C[t] is not None:
            raise TraceStructureError(index, "nested-begin", f"region {self.C[t].label} still open")
        self._begin(t, label, index)
        if self.record_clocks:
            self.event_clocks[index] = self.C[t].curr_clock

    def handle_end(self, t: int, label: str, index: int):
        node = self.C[t]
        if node is None:
            raise TraceStructureError(index, "end-without-begin")
        if node.label != label:
            raise TraceStructureError(index, "label-mismatch", f"expected {node.label}, got {label}")
        if self.record_clocks:
            self.event_clocks[index] = node.curr_clock
        self._end(t)

    def _begin(self, t: int, label: str, index: int):
        vt = self.V[t]
        vt.increment(t)
        node = TransactionNode(label, vt.copy(), t, index)
        self.C[t] = node
        stats = self.report.stats
        stats.transactions += 1
        self.live_nodes += 1
        if self.live_nodes > stats.max_live_nodes:
            stats.max_live_nodes = self.live_nodes
        if self.record_clocks:
            self.transaction_begins[(t, node.ordinal)] = (index, node.begin_clock)

    def _end(self, t: int):
        # 节点随之不可达；W/R/L 中的引用只保留时钟快照
        self.C[t] = None
        self.live_nodes -= 1

    # 访存与锁
    def handle_read(self, t: int, x: str, index: int):
        node = self.C[t]
        last_write = self.W.get(x)
        readers = self.R.get(x)
        if last_write is not None and last_write.thread != t and (readers is None or t not in readers):
            self.do_join(last_write, node, t, index)
            self.sub_region(node, t)
        if readers is None:
            readers = self.R[x] = {}
        readers[t] = ClockRef(node.curr_clock, t, index)

    def handle_write(self, t: int, x: str, index: int):
        node = self.C[t]
        readers = self.R.get(x)
        if readers:
            for reader, ref in list(readers.items()):
                if reader != t:
                    self.do_join(ref, node, t, index)
        else:
            last_write = self.W.get(x)
            if last_write is not None and last_write.thread != t:
                self.do_join(last_write, node, t, index)
        self.sub_region(node, t)
        self.W[x] = ClockRef(node.curr_clock, t, index)
        self.R.pop(x, None)

    def handle_acquire(self, t: int, m: str, index: int):
        node = self.C[t]
        last_release = self.L.get(m)
        if last_release is not None and last_release.thread != t:
            self.do_join(last_release, node, t, index)
            self.sub_region(node, t)

    def handle_release(self, t: int, m: str, index: int):
        self.L[m] = ClockRef(self.C[t].curr_clock, t, index)

    def sub_region(self, node: TransactionNode, t: int):
        """V(t) 与当前子区域时钟不同时开启新子区域"""
        vt = self.V[t]
        if node.curr_clock != vt:
            node.curr_clock = vt.copy()
            self.report.stats.subregions += 1

    # join / checkHB
    def do_join(self, source: ClockRef, node: TransactionNode, t: int, index: int):
        vt = self.V[t]
        vt.join_with(source.clock)
        self.report.stats.joins += 1
        if self._track_tvc:
            s = source.thread
            if self.record_tvc:
                def on_direct():
                    self.tvc_trajectory.append(
                        TvcSnapshot(index, "direct", self.thread_names[s], self.TV.snapshot()))
                self.TV.update_tvc(source.clock.get(s), s, vt.get(t), t, on_direct)
                self.tvc_trajectory.append(
                    TvcSnapshot(index, "propagated", self.thread_names[s], self.TV.snapshot()))
            else:
                self.TV.update_tvc(source.clock.get(s), s, vt.get(t), t)
        self.check_hb(node, source, t, index)

    def check_hb(self, node: TransactionNode, source: ClockRef, t: int, index: int):
        """至多两次时间戳比较：先判原子性违例，再判非可串行化轨迹"""
        self.hb_calls += 1
        self.hb_comparisons += 1
        begin_stamp = node.ordinal
        if begin_stamp <= source.clock.get(t):
            self._record_violation(node, source, t, index)
            return
        if not self._track_tvc:
            return
        s = source.thread
        tv_t = self.TV.row(t)
        seen = tv_t[s]
        # TV(t) 不属于当前事务或尚未设置时无需比较
        if tv_t[t] != begin_stamp or seen == 0:
            return
        self.hb_comparisons += 1
        if seen <= source.clock.get(s):
            if logger.isEnabledFor(logging.DEBUG):
                logger.debug("事件 %d 处发现非可串行化轨迹（线程 %s）", index, self.thread_names[t])
            self.report.mark_nonserializable(index)

    def _record_violation(self, node: TransactionNode, source: ClockRef, t: int, index: int):
        self.report.mark_nonserializable(index)
        if not self._report_violations:
            return
        if node.reported is None:
            node.reported = set()
        elif source.event in node.reported:
            return
        node.reported.add(source.event)
        self.report.add_violation(Violation(
            event=index,
            thread=self.thread_names[t],
            label=node.label,
            ordinal=node.ordinal,
            source_thread=self.thread_names[source.thread],
        ))
        logger.debug("事件 %d 处事务 %s#%d 违反原子性", index, node.label, node.ordinal)


def new_analyzer(mode: AnalysisMode = AnalysisMode.FULL, threads_hint: int = 0) -> RegionTrackAnalyzer:
    return RegionTrackAnalyzer(mode, threads_hint)


def analyze(trace: Trace, mode: AnalysisMode = AnalysisMode.FULL, *,
            excluded_labels: Optional[FrozenSet[str]] = None,
            threads_hint: int = 0) -> Report:
    """对整条轨迹运行 RegionTrack，返回报告（相同输入得到逐字节相同的 JSON）"""
    analyzer = RegionTrackAnalyzer(mode, threads_hint or len(trace.threads),
                                   excluded_labels=excluded_labels)
    return analyzer.feed(effective_events(trace.events, analyzer.excluded_labels))
