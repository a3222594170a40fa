"""
随机轨迹生成与压力轨迹构造
"""

import random
import string
from typing import Iterator, List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError, model_validator

from .model import Event, EventKind, Trace
from ..core.errors import ConfigError


class GenConfig(BaseModel):
    """随机轨迹生成参数；events 为读写/加解锁事件数（不含 begin/end）"""
    threads: int = Field(3, ge=2)
    events: int = Field(12, ge=0)
    variables: int = Field(3, ge=1)
    locks: int = Field(1, ge=0)
    region_labels: int = Field(3, ge=1)
    p_region: float = Field(0.7, ge=0.0, le=1.0)
    p_close: float = Field(0.3, ge=0.0, le=1.0)
    read_weight: float = Field(4.0, ge=0.0)
    write_weight: float = Field(3.0, ge=0.0)
    acquire_weight: float = Field(1.0, ge=0.0)
    release_weight: float = Field(1.0, ge=0.0)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _check_weights(self) -> "GenConfig":
        if self.read_weight + self.write_weight + self.acquire_weight + self.release_weight <= 0:
            raise ValueError("op-mix weights must sum to a positive value")
        if self.read_weight + self.write_weight <= 0:
            raise ValueError("read/write weights must not both be zero")
        return self

    @classmethod
    def build(cls, **values) -> "GenConfig":
        """构造并把校验错误转换为 ConfigError"""
        try:
            return cls(**values)
        except ValidationError as e:
            raise ConfigError(f"invalid generator config: {e}") from e

    def thread_names(self) -> List[str]:
        return [f"t{i}" for i in range(1, self.threads + 1)]

    def variable_names(self) -> List[str]:
        return [f"x{i}" for i in range(self.variables)]

    def lock_names(self) -> List[str]:
        return [f"m{i}" for i in range(self.locks)]

    def label_names(self) -> List[str]:
        letters = string.ascii_uppercase
        return [letters[i] if i < len(letters) else f"R{i}" for i in range(self.region_labels)]


def generate_random(config: GenConfig, seed: int) -> Trace:
    """按 (config, seed) 确定性地生成一条合法轨迹。

    锁遵守互斥纪律：只获取空闲锁，只释放自己持有的锁，不重入。
    所有未关闭区域在轨迹末尾依线程顺序关闭。
    """
    rng = random.Random(seed)
    threads = config.thread_names()
    variables = config.variable_names()
    locks = config.lock_names()
    labels = config.label_names()

    records: List[Tuple[str, EventKind, str]] = []
    open_region = {t: None for t in threads}
    holder = {m: None for m in locks}
    held = {t: [] for t in threads}

    for _ in range(config.events):
        t = rng.choice(threads)

        if open_region[t] is not None and rng.random() < config.p_close:
            records.append((t, EventKind.END, open_region[t]))
            open_region[t] = None
        if open_region[t] is None and rng.random() < config.p_region:
            label = rng.choice(labels)
            records.append((t, EventKind.BEGIN, label))
            open_region[t] = label

        free = [m for m in locks if holder[m] is None]
        choices = [(EventKind.READ, config.read_weight), (EventKind.WRITE, config.write_weight)]
        if free and config.acquire_weight > 0:
            choices.append((EventKind.ACQUIRE, config.acquire_weight))
        if held[t] and config.release_weight > 0:
            choices.append((EventKind.RELEASE, config.release_weight))
        kinds, weights = zip(*choices)
        kind = rng.choices(kinds, weights=weights)[0]

        if kind is EventKind.ACQUIRE:
            lock = rng.choice(free)
            holder[lock] = t
            held[t].append(lock)
            records.append((t, kind, lock))
        elif kind is EventKind.RELEASE:
            lock = held[t].pop(rng.randrange(len(held[t])))
            holder[lock] = None
            records.append((t, kind, lock))
        else:
            records.append((t, kind, rng.choice(variables)))

    for t in threads:
        if open_region[t] is not None:
            records.append((t, EventKind.END, open_region[t]))

    return Trace.from_records(records)


def iter_stress_events(total: int = 1_000_000, threads: int = 4, variables: int = 8,
                       region_length: int = 4, label: str = "P") -> Iterator[Event]:
    """生产者/消费者压力轨迹：偶数线程写、奇数线程读。

    每一轮所有线程先各自开启区域，再逐事件交错访问，最后依次关闭，
    因此同一时刻有 threads 个活动事务。以生成器形式产出，百万级事件无需整体驻留内存。
    """
    names = [f"t{i}" for i in range(1, threads + 1)]
    index = 0
    step = 0
    while True:
        body = min(region_length, (total - index) // threads - 2)
        if body <= 0:
            break
        for thread in names:
            index += 1
            yield Event(EventKind.BEGIN, thread, label, index)
        for k in range(body):
            for t, thread in enumerate(names):
                kind = EventKind.WRITE if t % 2 == 0 else EventKind.READ
                index += 1
                yield Event(kind, thread, f"x{(step + k + t // 2) % variables}", index)
        for thread in names:
            index += 1
            yield Event(EventKind.END, thread, label, index)
        step += body


def stress_trace(total: int, threads: int = 4, variables: int = 8,
                 region_length: Optional[int] = None) -> Trace:
    """物化的压力轨迹（仅用于小规模测试）"""
    events = tuple(iter_stress_events(total, threads, variables, region_length or 4))
    names = tuple(dict.fromkeys(e.thread for e in events))
    return Trace(events, names)
