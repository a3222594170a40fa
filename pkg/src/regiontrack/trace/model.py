"""
轨迹模型：事件、轨迹与结构校验
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union


class EventKind(Enum):
    """事件类型，value 即轨迹文件中的操作符"""
    READ = "r"
    WRITE = "w"
    ACQUIRE = "acq"
    RELEASE = "rel"
    BEGIN = "begin"
    END = "end"

    @property
    def is_access(self) -> bool:
        return self is EventKind.READ or self is EventKind.WRITE

    @property
    def is_lock(self) -> bool:
        return self is EventKind.ACQUIRE or self is EventKind.RELEASE

    @property
    def is_boundary(self) -> bool:
        return self is EventKind.BEGIN or self is EventKind.END


OP_TOKENS: Dict[str, EventKind] = {kind.value: kind for kind in EventKind}

# 区域外单个事件构成的一元事务使用的合成标签
UNARY_LABEL = "⟨unary⟩"


@dataclass(frozen=True, slots=True)
class Event:
    """轨迹中的一个事件；index 从 1 开始"""
    kind: EventKind
    thread: str
    operand: str
    index: int

    def to_line(self) -> str:
        return f"{self.thread} {self.kind.value} {self.operand}"


@dataclass(frozen=True)
class Trace:
    """事件序列；threads 按首次出现顺序排列，其位置即线程下标"""
    events: Tuple[Event, ...] = ()
    threads: Tuple[str, ...] = ()

    @classmethod
    def from_records(cls, records: Iterable[Tuple[str, Union[EventKind, str], str]]) -> "Trace":
        """由 (thread, op, operand) 三元组构造轨迹，自动编号并登记线程"""
        events: List[Event] = []
        threads: Dict[str, None] = {}
        for position, (thread, kind, operand) in enumerate(records, start=1):
            if not isinstance(kind, EventKind):
                kind = OP_TOKENS[kind]
            threads.setdefault(thread, None)
            events.append(Event(kind, thread, operand, position))
        return cls(tuple(events), tuple(threads))

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    @property
    def labels(self) -> Tuple[str, ...]:
        """按首次出现顺序列出区域标签"""
        seen: Dict[str, None] = {}
        for event in self.events:
            if event.kind is EventKind.BEGIN:
                seen.setdefault(event.operand, None)
        return tuple(seen)

    def event(self, index: int) -> Event:
        return self.events[index - 1]


@dataclass(frozen=True)
class StructureViolation:
    """一条结构问题；severity 为 error 或 warning"""
    index: int
    rule: str
    severity: str = "error"
    message: str = ""

    @property
    def is_error(self) -> bool:
        return self.severity == "error"

    def describe(self) -> str:
        text = f"{self.rule} at index {self.index}"
        return f"{text}: {self.message}" if self.message else text


def validate(trace: Trace) -> List[StructureViolation]:
    """校验轨迹结构。

    规则：扁平区域（不允许嵌套 begin）、end 必须匹配已打开的 begin 且标签一致、
    事件中的线程必须登记在 threads 中、index 与位置一致。
    锁纪律：不能获取已被持有的锁（含自身重入），只能释放自己持有的锁。
    轨迹结束时仍未关闭的区域只给出 warning。
    """
    violations: List[StructureViolation] = []
    known = set(trace.threads)
    open_regions: Dict[str, Event] = {}
    holders: Dict[str, str] = {}

    for position, event in enumerate(trace.events, start=1):
        if event.index != position:
            violations.append(StructureViolation(
                position, "index-mismatch", message=f"event carries index {event.index}"))
        if event.thread not in known:
            violations.append(StructureViolation(
                position, "unknown-thread", message=event.thread))
        if not event.thread or not event.operand:
            violations.append(StructureViolation(position, "empty-token"))

        if event.kind is EventKind.BEGIN:
            if event.thread in open_regions:
                violations.append(StructureViolation(
                    position, "nested-begin",
                    message=f"region {open_regions[event.thread].operand} still open"))
                continue
            open_regions[event.thread] = event
        elif event.kind is EventKind.END:
            opened = open_regions.get(event.thread)
            if opened is None:
                violations.append(StructureViolation(position, "end-without-begin"))
            elif opened.operand != event.operand:
                violations.append(StructureViolation(
                    position, "label-mismatch",
                    message=f"expected {opened.operand}, got {event.operand}"))
            else:
                del open_regions[event.thread]
        elif event.kind is EventKind.ACQUIRE:
            holder = holders.get(event.operand)
            if holder is not None:
                violations.append(StructureViolation(
                    position, "lock-held", message=f"{event.operand} held by {holder}"))
            else:
                holders[event.operand] = event.thread
        elif event.kind is EventKind.RELEASE:
            if holders.get(event.operand) != event.thread:
                violations.append(StructureViolation(
                    position, "release-not-held", message=event.operand))
            else:
                del holders[event.operand]

    for begin in sorted(open_regions.values(), key=lambda e: e.index):
        violations.append(StructureViolation(
            begin.index, "unclosed-region", severity="warning", message=begin.operand))

    return violations


def structural_errors(trace: Trace) -> List[StructureViolation]:
    return [v for v in validate(trace) if v.is_error]


def effective_events(events: Iterable[Event],
                     excluded_labels: Optional[FrozenSet[str]] = None) -> Iterator[Event]:
    """跳过被排除标签的 begin/end；区域内的事件随之成为一元事务"""
    if not excluded_labels:
        yield from events
        return
    for event in events:
        if event.kind.is_boundary and event.operand in excluded_labels:
            continue
        yield event
