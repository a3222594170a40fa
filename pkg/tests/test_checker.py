"""
RegionTrack 分析器测试
"""

import json
import sys
import unittest
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from regiontrack.core.errors import TraceStructureError
from regiontrack.engine.checker import AnalysisMode, RegionTrackAnalyzer, analyze, new_analyzer
from regiontrack.engine.report import Violation
from regiontrack.engine.tvc import TransactionalClocks
from regiontrack.trace.parser import parse_trace

from traces import alpha_1, alpha_3, case_1, case_2, disjoint, locked, single_thread


def _padded(row, size=3):
    return tuple(row) + (0,) * (size - len(row))


class TestAlphaTraces(unittest.TestCase):

    def test_alpha_1_nonserializable_without_violation(self):
        report = analyze(alpha_1(), AnalysisMode.FULL)
        self.assertTrue(report.non_serializable)
        self.assertEqual(report.first_nonser_event, 14)
        self.assertEqual(report.violations, [])

    def test_alpha_1_stats(self):
        stats = analyze(alpha_1()).stats
        self.assertEqual((stats.joins, stats.subregions, stats.max_live_nodes, stats.transactions),
                         (3, 3, 3, 5))

    def test_alpha_3_violation(self):
        report = analyze(alpha_3())
        self.assertTrue(report.non_serializable)
        self.assertEqual(report.first_nonser_event, 14)
        self.assertEqual(report.violations, [
            Violation(event=14, thread="t1", label="A", ordinal=1, source_thread="t3"),
        ])
        self.assertEqual(report.stats.joins, 4)
        self.assertEqual(report.stats.subregions, 4)

    def test_alpha_3_modes(self):
        atomicity = analyze(alpha_3(), AnalysisMode.ATOMICITY_ONLY)
        trace_only = analyze(alpha_3(), AnalysisMode.TRACE_ONLY)
        self.assertEqual(atomicity.violation_keys(), {("t1", 1)})
        self.assertTrue(trace_only.non_serializable)
        self.assertEqual(trace_only.violations, [])
        self.assertEqual(trace_only.first_nonser_event, 14)

    def test_alpha_1_atomicity_only_sees_nothing(self):
        report = analyze(alpha_1(), AnalysisMode.ATOMICITY_ONLY)
        self.assertFalse(report.non_serializable)
        self.assertEqual(report.violations, [])

    def test_excluded_label_becomes_unary(self):
        report = analyze(alpha_3(), excluded_labels=frozenset({"A"}))
        self.assertEqual(report.violations, [])
        # tx1 的两个事件各自成为一元事务
        self.assertEqual(report.stats.transactions, 6)


class TestConflictShapes(unittest.TestCase):

    def test_case_1_violation(self):
        report = analyze(case_1())
        self.assertEqual(report.violations, [
            Violation(event=7, thread="t1", label="A", ordinal=1, source_thread="t2"),
        ])

    def test_case_2_nonserializable_only(self):
        report = analyze(case_2())
        self.assertTrue(report.non_serializable)
        self.assertEqual(report.first_nonser_event, 6)
        self.assertEqual(report.violations, [])

    def test_disjoint_is_serializable(self):
        report = analyze(disjoint())
        self.assertFalse(report.non_serializable)
        self.assertIsNone(report.first_nonser_event)
        self.assertEqual(report.stats.joins, 0)

    def test_locked_sections_serializable(self):
        report = analyze(locked())
        self.assertFalse(report.non_serializable)
        self.assertEqual(report.stats.joins, 2)

    def test_single_thread(self):
        stats = analyze(single_thread()).stats
        self.assertEqual((stats.joins, stats.subregions), (0, 0))
        self.assertEqual(stats.transactions, 2)

    def test_streaming_reports_online(self):
        trace = case_1()
        analyzer = new_analyzer(AnalysisMode.FULL)
        for event in trace.events[:7]:
            analyzer.on_event(event)
        # 违例在 t1 的读发生时就已报告，不必等到 end
        self.assertEqual([v.event for v in analyzer.report.violations], [7])
        analyzer.on_event(trace.events[7])
        self.assertEqual(analyzer.finish().to_json(), analyze(trace).to_json())

    def test_empty_trace(self):
        report = analyze(parse_trace(""))
        self.assertEqual(json.loads(report.to_json()), {
            "non_serializable": False,
            "first_nonser_event": None,
            "violations": [],
            "stats": {"joins": 0, "subregions": 0, "max_live_nodes": 0, "transactions": 0},
        })


class TestReportRendering(unittest.TestCase):

    def test_json_is_deterministic(self):
        first = analyze(alpha_3()).to_json()
        second = analyze(alpha_3()).to_json()
        self.assertEqual(first, second)
        self.assertEqual(list(json.loads(first)),
                         ["non_serializable", "first_nonser_event", "violations", "stats"])

    def test_human_lines(self):
        lines = analyze(alpha_3()).human_lines()
        self.assertEqual(lines, [
            "verdict=non-serializable first=14",
            "violation event=14 thread=t1 label=A ordinal=1 source=t3",
            "distinct A=1",
        ])


class TestTransactionalClocks(unittest.TestCase):

    def _clocks(self, *rows):
        tv = TransactionalClocks(len(rows))
        tv.rows = [list(row) for row in rows]
        return tv

    def test_first_sink_is_kept(self):
        tv = TransactionalClocks(2)
        tv.update_tvc(1, 0, 1, 1)
        self.assertEqual(tv.rows, [[1, 1], [0, 0]])
        # 同一源事务之后的汇事务不改变 TV
        tv.update_tvc(1, 0, 2, 1)
        self.assertEqual(tv.rows, [[1, 1], [0, 0]])
        # 更新的源事务重置整行
        tv.update_tvc(2, 0, 2, 1)
        self.assertEqual(tv.rows, [[2, 2], [0, 0]])

    def test_forward_propagation_only(self):
        # t1 的源事务已到达 t2；t0 的源事务到达 t1 后经正向传播到达 t2
        tv = self._clocks([0, 0, 0], [0, 1, 1], [0, 0, 0])
        tv.update_tvc(1, 0, 1, 1)
        self.assertEqual(tv.rows, [[1, 1, 1], [0, 1, 1], [0, 0, 0]])

    def test_back_propagation_only(self):
        # t2 的源事务已到达 t0；t0 的源事务到达 t1 后经反向传播补到 t2 的行
        tv = self._clocks([0, 0, 0], [0, 0, 0], [1, 0, 1])
        tv.update_tvc(1, 0, 1, 1)
        self.assertEqual(tv.rows, [[1, 1, 0], [0, 0, 0], [1, 1, 1]])

    def test_stale_source_skips_direct_update(self):
        tv = self._clocks([2, 0, 0], [0, 0, 0], [1, 0, 1])
        tv.update_tvc(1, 0, 3, 1)
        self.assertEqual(tv.rows[0], [2, 0, 0])
        self.assertEqual(tv.rows[2], [1, 3, 1])

    def test_forward_propagation_zero_guards(self):
        tv = self._clocks([1, 0, 0], [0, 1, 5], [0, 0, 0])
        self.assertEqual(tv.forward_propagate({0, 1, 2}, 0, 1), {2})
        self.assertEqual(tv.rows[0], [1, 0, 0])

        tv = self._clocks([1, 1, 4], [0, 1, 0], [0, 0, 0])
        tv.forward_propagate({0, 1, 2}, 0, 1)
        self.assertEqual(tv.rows[0], [1, 1, 4])

    def test_back_propagation_needs_seen_source(self):
        tv = self._clocks([1, 1, 0], [0, 0, 0], [0, 0, 1])
        self.assertEqual(tv.back_propagate({0, 1, 2}, 0, 1, 1, 1), {2})
        self.assertEqual(tv.rows[2], [0, 0, 1])


class TestInstrumentation(unittest.TestCase):

    def _run(self, trace, **kwargs):
        analyzer = RegionTrackAnalyzer(AnalysisMode.FULL, **kwargs)
        analyzer.feed(trace.events)
        return analyzer

    def test_tvc_trajectory_alpha_1(self):
        analyzer = self._run(alpha_1(), record_tvc=True)
        points = {(p.event, p.phase): p for p in analyzer.tvc_trajectory}

        self.assertEqual(_padded(points[(5, "propagated")].rows[0]), (1, 1, 0))
        self.assertEqual(_padded(points[(7, "propagated")].rows[0]), (1, 1, 1))
        self.assertEqual(points[(14, "direct")].source_thread, "t3")
        self.assertEqual(_padded(points[(14, "direct")].rows[2]), (1, 0, 2))
        self.assertEqual(_padded(points[(14, "propagated")].rows[2]), (1, 1, 2))

    def test_check_hb_uses_at_most_two_comparisons(self):
        for trace in (alpha_1(), alpha_3(), case_1(), case_2()):
            analyzer = self._run(trace)
            counters = analyzer.report.counters
            self.assertLessEqual(counters["hb_comparisons"], 2 * counters["hb_calls"])
            self.assertEqual(counters["hb_calls"], analyzer.report.stats.joins)

    def test_comparison_counts(self):
        # 情形一：两次 join 都只比较 begin 时间戳（第二次即发现违例）
        counters = self._run(case_1()).report.counters
        self.assertEqual((counters["hb_calls"], counters["hb_comparisons"]), (2, 2))
        # 情形二：第二次 join 时 TV(t2) 已设置，再比较一次 TV 时间戳
        counters = self._run(case_2()).report.counters
        self.assertEqual((counters["hb_calls"], counters["hb_comparisons"]), (2, 3))

    def test_live_nodes_after_trace(self):
        analyzer = self._run(alpha_1())
        # 只有 t1 的区域 A 在轨迹结束时仍未关闭
        self.assertEqual(analyzer.live_nodes, 1)
        self.assertIsNotNone(analyzer.C[0])
        self.assertIsNone(analyzer.C[1])

    def test_event_clocks(self):
        analyzer = self._run(alpha_3(), record_clocks=True)
        self.assertEqual(analyzer.event_clocks[14].padded(3), [1, 1, 2])
        index, begin_clock = analyzer.transaction_begins[(0, 1)]
        self.assertEqual(index, 1)
        self.assertEqual(begin_clock.padded(3), [1, 0, 0])

    def test_structure_errors_raise(self):
        with self.assertRaises(TraceStructureError) as ctx:
            analyze(parse_trace("t1 begin A\nt1 begin B\n"))
        self.assertEqual(ctx.exception.rule, "nested-begin")
        with self.assertRaises(TraceStructureError):
            analyze(parse_trace("t1 end A\n"))
        with self.assertRaises(TraceStructureError):
            analyze(parse_trace("t1 begin A\nt1 end B\n"))


if __name__ == '__main__':
    unittest.main()
