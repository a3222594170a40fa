"""
暴力 oracle：事件级 happens-before 闭包、事务级 THB 闭包及其判定

仅用于小规模轨迹的基准真值。关系以 Python 整数位集存储，
第 i 位对应轨迹中第 i 个位置（从 0 开始）。
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Set, Tuple

from ..core.errors import OracleSizeError, TraceStructureError
from ..trace.model import UNARY_LABEL, Event, EventKind, Trace, structural_errors


logger = logging.getLogger(__name__)

DEFAULT_CLOSURE_LIMIT = 200


def conflicts(a: Event, b: Event) -> bool:
    """同一变量且至少一个写、同一把锁、或同一线程"""
    if a.thread == b.thread:
        return True
    ka, kb = a.kind, b.kind
    if ka.is_access and kb.is_access:
        return a.operand == b.operand and (ka is EventKind.WRITE or kb is EventKind.WRITE)
    if ka.is_lock and kb.is_lock:
        return a.operand == b.operand
    return False


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass
class HbClosure:
    """reaches[i] 的第 j 位表示 e_{i+1} → e_{j+1}"""
    n: int
    reaches: List[int]

    def happens_before(self, a: int, b: int) -> bool:
        """a、b 为从 1 开始的事件序号"""
        return bool(self.reaches[a - 1] >> (b - 1) & 1)

    def successors(self, a: int) -> List[int]:
        return [j + 1 for j in _bits(self.reaches[a - 1])]


def _guard(trace: Trace, limit: Optional[int]):
    limit = DEFAULT_CLOSURE_LIMIT if limit is None else limit
    if len(trace) > limit:
        raise OracleSizeError(len(trace), limit)
    # 只接受结构合法的轨迹
    errors = structural_errors(trace)
    if errors:
        raise TraceStructureError(errors[0].index, errors[0].rule, errors[0].message or None)


def event_closure(trace: Trace, limit: Optional[int] = None) -> HbClosure:
    """冲突关系（按轨迹顺序）的传递闭包"""
    _guard(trace, limit)
    events = trace.events
    n = len(events)
    reaches = [0] * n
    for i in range(n - 1, -1, -1):
        ei = events[i]
        acc = 0
        for j in range(i + 1, n):
            if conflicts(ei, events[j]):
                acc |= (1 << j) | reaches[j]
        reaches[i] = acc
    return HbClosure(n, reaches)


@dataclass
class TransactionInfo:
    """事务（含一元事务）的位置信息；end 为 None 表示轨迹结束时仍在运行"""
    thread: str
    ordinal: int
    label: str
    begin: int
    end: Optional[int]
    events: List[int] = field(default_factory=list)

    @property
    def key(self) -> Tuple[str, int]:
        return (self.thread, self.ordinal)

    @property
    def is_unary(self) -> bool:
        return self.label == UNARY_LABEL


def transactions_of(trace: Trace) -> List[TransactionInfo]:
    """按开始顺序列出事务；区域外的事件各自构成一元事务"""
    result: List[TransactionInfo] = []
    counters: Dict[str, int] = {}
    open_tx: Dict[str, TransactionInfo] = {}

    for event in trace.events:
        t = event.thread
        if event.kind is EventKind.BEGIN:
            counters[t] = counters.get(t, 0) + 1
            tx = TransactionInfo(t, counters[t], event.operand, event.index, None, [event.index])
            open_tx[t] = tx
            result.append(tx)
        elif event.kind is EventKind.END:
            tx = open_tx.pop(t, None)
            if tx is not None:
                tx.events.append(event.index)
                tx.end = event.index
        elif t in open_tx:
            open_tx[t].events.append(event.index)
        else:
            counters[t] = counters.get(t, 0) + 1
            result.append(TransactionInfo(t, counters[t], UNARY_LABEL, event.index,
                                          event.index, [event.index]))
    return result


@dataclass
class ThbClosure:
    """事务级 happens-before（⇝）的传递闭包"""
    transactions: List[TransactionInfo]
    relation: List[int]

    def reaches(self, i: int, j: int) -> bool:
        return bool(self.relation[i] >> j & 1)

    def index_of(self, key: Tuple[str, int]) -> int:
        for position, tx in enumerate(self.transactions):
            if tx.key == key:
                return position
        raise KeyError(key)

    def reaches_key(self, a: Tuple[str, int], b: Tuple[str, int]) -> bool:
        return self.reaches(self.index_of(a), self.index_of(b))


def thb_closure(trace: Trace, limit: Optional[int] = None,
                closure: Optional[HbClosure] = None) -> ThbClosure:
    """把事件级 HB 提升到事务级，加入线程内相邻事务的程序序边后再做传递闭包"""
    closure = closure or event_closure(trace, limit)
    txs = transactions_of(trace)
    owner = [0] * len(trace)
    for position, tx in enumerate(txs):
        for index in tx.events:
            owner[index - 1] = position

    m = len(txs)
    relation = [0] * m
    for position, tx in enumerate(txs):
        reach = 0
        for index in tx.events:
            reach |= closure.reaches[index - 1]
        for j in _bits(reach):
            target = owner[j]
            if target != position:
                relation[position] |= 1 << target

    last_by_thread: Dict[str, int] = {}
    for position, tx in enumerate(txs):
        previous = last_by_thread.get(tx.thread)
        if previous is not None:
            relation[previous] |= 1 << position
        last_by_thread[tx.thread] = position

    for k in range(m):
        bit = 1 << k
        row_k = relation[k]
        for i in range(m):
            if relation[i] & bit:
                relation[i] |= row_k
    return ThbClosure(txs, relation)


def oracle_violations(trace: Trace, limit: Optional[int] = None,
                      closure: Optional[HbClosure] = None) -> Set[Tuple[str, int]]:
    """不可串行化的事务：存在 e_m ∈ tx 与其它线程的 e_x，使 e_x → e_m 且 tx.begin → e_x"""
    return {tx.key for tx in _violated(trace, limit, closure)}


def _violated(trace: Trace, limit: Optional[int], closure: Optional[HbClosure]) -> List[TransactionInfo]:
    closure = closure or event_closure(trace, limit)
    thread_mask: Dict[str, int] = {}
    for event in trace.events:
        thread_mask[event.thread] = thread_mask.get(event.thread, 0) | (1 << (event.index - 1))
    everything = (1 << len(trace)) - 1

    violated = []
    for tx in transactions_of(trace):
        own = 0
        for index in tx.events:
            own |= 1 << (index - 1)
        candidates = closure.reaches[tx.begin - 1] & (everything ^ thread_mask[tx.thread])
        for x in _bits(candidates):
            if closure.reaches[x] & own:
                violated.append(tx)
                break
    return violated


def oracle_nonserializable(trace: Trace, limit: Optional[int] = None,
                           closure: Optional[HbClosure] = None) -> bool:
    """存在不同线程的两个事务互相 ⇝"""
    thb = thb_closure(trace, limit, closure)
    txs = thb.transactions
    for i, a in enumerate(txs):
        for j in _bits(thb.relation[i]):
            if j > i and txs[j].thread != a.thread and thb.reaches(j, i):
                return True
    return False


def oracle_report(trace: Trace, limit: Optional[int] = None) -> Dict[str, object]:
    """CLI 使用的 oracle JSON"""
    closure = event_closure(trace, limit)
    violated = sorted(_violated(trace, limit, closure), key=lambda tx: tx.begin)
    verdict = oracle_nonserializable(trace, limit, closure)
    logger.info("oracle: nonserializable=%s, violations=%d", verdict, len(violated))
    return {
        "nonserializable": verdict,
        "violations": [
            {"thread": tx.thread, "ordinal": tx.ordinal, "label": tx.label} for tx in violated
        ],
    }
