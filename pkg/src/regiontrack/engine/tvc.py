"""
事务向量时钟 TV(t)

TV(t)[t] 记录线程 t 最近一个源事务的时间戳，TV(t)[u]（u ≠ t）记录该源事务
在线程 u 上的第一个汇事务时间戳，0 表示未设置。时间戳 1 是第一个合法事务序号，
因此 0 可以无歧义地表示“未设置”：正向传播从不复制 0，也不会在 TV(t1)[t2] = 0
时触发；反向传播要求 TV(t')[t1] ≠ 0。
"""

import logging
from typing import Callable, List, Optional, Set, Tuple


logger = logging.getLogger(__name__)


class TransactionalClocks:
    """所有线程的事务向量时钟，按线程下标稠密存放"""

    __slots__ = ("rows",)

    def __init__(self, size: int = 0):
        self.rows: List[List[int]] = [[0] * size for _ in range(size)]

    def __len__(self) -> int:
        return len(self.rows)

    def ensure(self, size: int):
        """登记新线程：每行补 0，并追加全 0 行"""
        current = len(self.rows)
        if size <= current:
            return
        for row in self.rows:
            row.extend([0] * (size - current))
        for _ in range(size - current):
            self.rows.append([0] * size)

    def row(self, t: int) -> List[int]:
        return self.rows[t]

    def snapshot(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(row) for row in self.rows)

    def update_tvc(self, source: int, source_thread: int, sink: int, sink_thread: int,
                   on_direct: Optional[Callable[[], None]] = None):
        """一次跨线程 join 之后更新源线程的 TVC 并传播。

        source = V(e_x)[T(e_x)]，sink = V(t)[t]。源事务不是源线程最近的源事务时
        （TV(s)[s] > source）不做直接更新，但仍执行反向传播。
        """
        s, t = source_thread, sink_thread
        tv_s = self.rows[s]
        everyone = set(range(len(self.rows)))

        if tv_s[s] == source:
            if tv_s[t] == 0 or tv_s[t] > sink:
                tv_s[t] = sink
            if on_direct is not None:
                on_direct()
            self.forward_propagate(everyone, s, t)
        elif tv_s[s] < source:
            for i in range(len(tv_s)):
                tv_s[i] = 0
            tv_s[s] = source
            tv_s[t] = sink
            if on_direct is not None:
                on_direct()
            self.forward_propagate(everyone, s, t)

        self.back_propagate(everyone, s, t, source, sink)

        if logger.isEnabledFor(logging.DEBUG):
            logger.debug("TVC 更新 %s -> %s (source=%d, sink=%d): %s",
                         s, t, source, sink, self.rows)

    def back_propagate(self, work: Set[int], t1: int, t2: int, source: int, sink: int) -> Set[int]:
        """把 t1 源事务 ⇝ t2 汇事务的关系传给能看到该源事务的其它线程"""
        remaining = work - {t1, t2}
        rows = self.rows
        for other in sorted(remaining):
            if other not in remaining:
                continue
            tv_o = rows[other]
            seen = tv_o[t1]
            if seen != 0 and seen <= source:
                if tv_o[t2] == 0 or tv_o[t2] > sink:
                    tv_o[t2] = sink
                self.forward_propagate(set(range(len(rows))), other, t1)
                remaining = self.back_propagate(remaining, other, t2, tv_o[other], sink)
        return remaining

    def forward_propagate(self, work: Set[int], t1: int, t2: int) -> Set[int]:
        """把 t2 最近源事务可达的汇事务复制给 t1（若 t1 的事务 ⇝ t2 的该源事务）"""
        remaining = work - {t1, t2}
        rows = self.rows
        tv_1 = rows[t1]
        tv_2 = rows[t2]
        first = tv_1[t2]
        latest = tv_2[t2]
        if first == 0 or latest == 0 or first > latest:
            return remaining

        for other in range(len(tv_1)):
            if other == t1:
                continue
            value = tv_2[other]
            if value != 0 and (tv_1[other] == 0 or tv_1[other] > value):
                tv_1[other] = value
                if other in remaining:
                    remaining = self.forward_propagate(remaining, t1, other)
        return remaining
