"""
事务级 happens-before 图

节点为事务，边记录首尾事件的序号。keep_first=True 时每个有序节点对只保留
第一条边（Velodrome 策略）；否则累计边的重数。
"""

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple


TxKey = Tuple[int, int]  # (线程下标, 事务序号)


@dataclass
class EdgeStamp:
    head: int
    tail: int
    count: int = 1


@dataclass
class GraphNode:
    key: TxKey
    running: bool = True
    out: Dict[TxKey, EdgeStamp] = field(default_factory=dict)


class ThbGraph:
    def __init__(self, keep_first: bool = True):
        self.keep_first = keep_first
        self.nodes: Dict[TxKey, GraphNode] = {}
        self.counters: Dict[str, int] = {
            "nodes_created": 0,
            "edges_recorded": 0,
            "edge_events": 0,
            "cycle_searches": 0,
            "nodes_pruned": 0,
        }

    def __contains__(self, key: TxKey) -> bool:
        return key in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def add_node(self, key: TxKey):
        self.nodes[key] = GraphNode(key)
        self.counters["nodes_created"] += 1

    def finish(self, key: TxKey):
        node = self.nodes.get(key)
        if node is not None:
            node.running = False

    def add_edge(self, src: TxKey, dst: TxKey, head: int, tail: int) -> bool:
        """记录 src ⇝ dst；返回是否为新节点对"""
        node = self.nodes.get(src)
        if node is None or src == dst or dst not in self.nodes:
            return False
        self.counters["edge_events"] += 1
        stamp = node.out.get(dst)
        if stamp is not None:
            if not self.keep_first:
                stamp.count += 1
            return False
        node.out[dst] = EdgeStamp(head, tail)
        self.counters["edges_recorded"] += 1
        return True

    def reachable(self, start: TxKey, target: TxKey) -> bool:
        """是否存在 start ⇝* target 的路径"""
        self.counters["cycle_searches"] += 1
        if start == target:
            return True
        seen = {start}
        queue = deque([start])
        while queue:
            current = queue.popleft()
            for nxt in self.nodes[current].out:
                if nxt == target:
                    return True
                if nxt not in seen and nxt in self.nodes:
                    seen.add(nxt)
                    queue.append(nxt)
        return False

    def earliest_arrival(self, start: TxKey, target: TxKey) -> Optional[int]:
        """沿“递增”路径从 start 出发到达 target 的最早事件序号。

        在中间节点上，出边的首事件不得早于入边的尾事件；起点的出边不受限制。
        """
        best: Dict[TxKey, int] = {}
        heap: List[Tuple[int, TxKey]] = []
        for nxt, stamp in self.nodes[start].out.items():
            if nxt in self.nodes and stamp.tail < best.get(nxt, stamp.tail + 1):
                best[nxt] = stamp.tail
                heapq.heappush(heap, (stamp.tail, nxt))
        while heap:
            arrival, current = heapq.heappop(heap)
            if arrival > best.get(current, arrival):
                continue
            if current == target:
                return arrival
            if current == start:
                continue
            for nxt, stamp in self.nodes[current].out.items():
                if stamp.head < arrival or nxt not in self.nodes:
                    continue
                if stamp.tail < best.get(nxt, stamp.tail + 1):
                    best[nxt] = stamp.tail
                    heapq.heappush(heap, (stamp.tail, nxt))
        return None

    def prune(self) -> int:
        """删除所有运行中事务都不可达的已结束节点"""
        alive: Set[TxKey] = {key for key, node in self.nodes.items() if node.running}
        queue = deque(alive)
        while queue:
            current = queue.popleft()
            for nxt in self.nodes[current].out:
                if nxt not in alive and nxt in self.nodes:
                    alive.add(nxt)
                    queue.append(nxt)
        dead = [key for key in self.nodes if key not in alive]
        for key in dead:
            del self.nodes[key]
        self.counters["nodes_pruned"] += len(dead)
        return len(dead)
