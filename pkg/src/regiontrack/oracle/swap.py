"""
交换枚举微型 oracle：在等价类中搜索让事务连续执行的轨迹
"""

from collections import deque
from typing import Tuple

from .closure import conflicts, transactions_of
from ..core.errors import OracleSizeError
from ..trace.model import Trace


DEFAULT_SWAP_LIMIT = 12


def _contiguous(order: Tuple[int, ...], members: frozenset) -> bool:
    positions = [p for p, index in enumerate(order) if index in members]
    return positions[-1] - positions[0] + 1 == len(positions)


def swap_serializability(trace: Trace, tx: Tuple[str, int], limit: int = DEFAULT_SWAP_LIMIT) -> bool:
    """广度优先地交换相邻的可交换事件；找到 tx 连续执行的等价轨迹即返回 True"""
    if len(trace) > limit:
        raise OracleSizeError(len(trace), limit)

    target = next((info for info in transactions_of(trace) if info.key == tx), None)
    if target is None:
        raise KeyError(tx)
    members = frozenset(target.events)

    events = trace.events
    n = len(events)
    commute = [[not conflicts(events[i], events[j]) for j in range(n)] for i in range(n)]

    start = tuple(range(1, n + 1))
    if _contiguous(start, members):
        return True

    seen = {start}
    queue = deque([start])
    while queue:
        order = queue.popleft()
        for k in range(n - 1):
            a, b = order[k], order[k + 1]
            if not commute[a - 1][b - 1]:
                continue
            swapped = order[:k] + (b, a) + order[k + 2:]
            if swapped in seen:
                continue
            if _contiguous(swapped, members):
                return True
            seen.add(swapped)
            queue.append(swapped)
    return False
