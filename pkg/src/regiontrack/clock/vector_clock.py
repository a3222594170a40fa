"""
可增长的稠密向量时钟

缺失分量读作 0；写入越界分量时时钟自动增长。
V(t)、V(e)、W(x)、R(t, x)、L(m) 都由它表示。
"""

from __future__ import annotations

from typing import Iterable, List, Optional


MAX_STAMP = (1 << 64) - 1


class VectorClock:
    __slots__ = ("stamps",)

    def __init__(self, stamps: Optional[Iterable[int]] = None, size: int = 0):
        self.stamps: List[int] = list(stamps) if stamps is not None else []
        if size > len(self.stamps):
            self.stamps.extend([0] * (size - len(self.stamps)))

    def get(self, t: int) -> int:
        stamps = self.stamps
        return stamps[t] if t < len(stamps) else 0

    def __getitem__(self, t: int) -> int:
        return self.get(t)

    def __setitem__(self, t: int, value: int):
        if value < 0:
            raise ValueError("timestamps are non-negative")
        if value > MAX_STAMP:
            raise OverflowError("vector clock timestamp overflow")
        stamps = self.stamps
        if t >= len(stamps):
            stamps.extend([0] * (t + 1 - len(stamps)))
        stamps[t] = value

    def __len__(self) -> int:
        return len(self.stamps)

    def increment(self, t: int) -> None:
        """原地将分量 t 加 1"""
        self[t] = self.get(t) + 1

    def join_with(self, other: VectorClock) -> bool:
        """原地合并 other；返回本时钟是否发生变化"""
        mine = self.stamps
        theirs = other.stamps
        if len(theirs) > len(mine):
            mine.extend([0] * (len(theirs) - len(mine)))
        changed = False
        for i, value in enumerate(theirs):
            if value > mine[i]:
                mine[i] = value
                changed = True
        return changed

    def leq(self, other: VectorClock) -> bool:
        """逐分量 ≤（⊑）"""
        theirs = other.stamps
        n = len(theirs)
        for i, value in enumerate(self.stamps):
            if value > (theirs[i] if i < n else 0):
                return False
        return True

    def copy(self) -> VectorClock:
        clone = VectorClock.__new__(VectorClock)
        clone.stamps = self.stamps[:]
        return clone

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorClock):
            return NotImplemented
        a, b = self.stamps, other.stamps
        if len(a) == len(b):
            return a == b
        if len(a) < len(b):
            a, b = b, a
        return a[:len(b)] == b and not any(a[len(b):])

    __hash__ = None

    def to_json(self) -> List[int]:
        return list(self.stamps)

    def padded(self, size: int) -> List[int]:
        return [self.get(i) for i in range(max(size, len(self.stamps)))]

    def __repr__(self) -> str:
        return f"VectorClock({self.stamps})"


def vc_inc(clock: VectorClock, t: int) -> VectorClock:
    """返回 clock 在分量 t 上加 1 后的新时钟"""
    if t < 0:
        raise ValueError("thread index must be non-negative")
    result = clock.copy()
    result.increment(t)
    return result


def vc_join(a: VectorClock, b: VectorClock) -> VectorClock:
    """a ⊔ b"""
    result = a.copy()
    result.join_with(b)
    return result


def vc_leq(a: VectorClock, b: VectorClock) -> bool:
    """a ⊑ b"""
    return a.leq(b)


def vc_copy(clock: VectorClock) -> VectorClock:
    return clock.copy()
