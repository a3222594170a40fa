"""
基于随机轨迹的性质测试

默认规模适合本地快速运行；设置 REGIONTRACK_FULL_SUITE=1 后扩大到验收规模。
"""

import os
import random
import sys
import time
import unittest
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from regiontrack.core.compare import compare_trace
from regiontrack.engine.checker import AnalysisMode, RegionTrackAnalyzer
from regiontrack.oracle.closure import event_closure, oracle_violations, transactions_of
from regiontrack.oracle.swap import swap_serializability
from regiontrack.trace.generator import GenConfig, generate_random, iter_stress_events


FULL_SUITE = os.getenv("REGIONTRACK_FULL_SUITE") == "1"


def _size(desk: int, full: int) -> int:
    return full if FULL_SUITE else desk


def varied_config(seed: int) -> GenConfig:
    """2–4 个线程、6–20 个事件、1–4 个变量、0–2 把锁、不同的区域密度"""
    rng = random.Random(seed * 7919 + 17)
    return GenConfig(
        threads=rng.randint(2, 4),
        events=rng.randint(6, 20),
        variables=rng.randint(1, 4),
        locks=rng.randint(0, 2),
        region_labels=rng.randint(1, 3),
        p_region=rng.choice((0.3, 0.6, 0.9)),
        p_close=rng.choice((0.2, 0.4)),
    )


def random_trace(seed: int):
    return generate_random(varied_config(seed), seed)


class TestEngineAgainstOracle(unittest.TestCase):

    def test_relations_hold_on_random_traces(self):
        for seed in range(_size(300, 100_000)):
            result = compare_trace(random_trace(seed), seed=seed)
            self.assertTrue(result.ok, f"seed {seed}: {result.breaches}")

    def test_strict_witnesses_exist(self):
        velodrome_missed = naive_extra = None
        for seed in range(20_000):
            result = compare_trace(random_trace(seed), seed=seed)
            if velodrome_missed is None and result.velodrome_missed:
                velodrome_missed = seed
            if naive_extra is None and result.naive_extra:
                naive_extra = seed
            if velodrome_missed is not None and naive_extra is not None:
                break
        self.assertIsNotNone(velodrome_missed, "no trace where velodrome reports fewer violations")
        self.assertIsNotNone(naive_extra, "no trace where naive-blame reports more violations")


class TestOracleSelfConsistency(unittest.TestCase):

    def test_swap_enumeration_matches_closure(self):
        config = GenConfig(threads=2, events=6, variables=2, locks=1, region_labels=2)
        checked = 0
        for seed in range(_size(200, 20_000)):
            trace = generate_random(config, seed)
            if len(trace) > 12:
                continue
            violated = oracle_violations(trace)
            for tx in transactions_of(trace):
                checked += 1
                self.assertEqual(swap_serializability(trace, tx.key), tx.key not in violated,
                                 f"seed {seed}, tx {tx.key}")
        self.assertGreater(checked, 0)


class TestTimestampReachability(unittest.TestCase):

    def test_begin_stamp_matches_event_reachability(self):
        config = GenConfig(threads=3, events=10, variables=2, locks=1)
        for seed in range(_size(200, 5_000)):
            trace = generate_random(config, seed)
            analyzer = RegionTrackAnalyzer(AnalysisMode.FULL, record_clocks=True)
            analyzer.feed(trace.events)
            closure = event_closure(trace)

            for (t, ordinal), (begin_index, begin_clock) in analyzer.transaction_begins.items():
                stamp = begin_clock.get(t)
                for index, clock in analyzer.event_clocks.items():
                    if index == begin_index:
                        continue
                    self.assertEqual(
                        stamp <= clock.get(t),
                        closure.happens_before(begin_index, index),
                        f"seed {seed}: tx ({t}, {ordinal}) begin {begin_index}, event {index}")


class TestResourceInvariants(unittest.TestCase):

    def test_live_nodes_and_comparisons_on_random_traces(self):
        for seed in range(_size(300, 100_000)):
            trace = random_trace(seed)
            analyzer = RegionTrackAnalyzer(AnalysisMode.FULL)
            report = analyzer.feed(trace.events)
            self.assertLessEqual(report.stats.max_live_nodes, len(trace.threads))
            self.assertLessEqual(report.counters["hb_comparisons"], 2 * report.counters["hb_calls"])

    @pytest.mark.slow
    def test_stress_trace(self):
        total = _size(50_000, 1_000_000)
        analyzer = RegionTrackAnalyzer(AnalysisMode.FULL, threads_hint=4)
        started = time.monotonic()
        report = analyzer.feed(iter_stress_events(total, threads=4, variables=8))
        elapsed = time.monotonic() - started

        self.assertEqual(report.stats.max_live_nodes, 4)
        self.assertLessEqual(report.counters["hb_comparisons"], 2 * report.counters["hb_calls"])
        self.assertGreater(report.stats.joins, 0)
        if FULL_SUITE:
            self.assertLess(elapsed, 60.0)


if __name__ == '__main__':
    unittest.main()
