"""
向量时钟测试
"""

import sys
import unittest
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from regiontrack.clock.vector_clock import MAX_STAMP, VectorClock, vc_copy, vc_inc, vc_join, vc_leq


class TestVectorClock(unittest.TestCase):

    def test_missing_components_read_zero(self):
        clock = VectorClock([1, 2])
        self.assertEqual(clock[5], 0)
        self.assertEqual(clock.get(1), 2)

    def test_inc_returns_new_clock(self):
        clock = VectorClock([1])
        bumped = vc_inc(clock, 2)
        self.assertEqual(bumped.to_json(), [1, 0, 1])
        self.assertEqual(clock.to_json(), [1])

    def test_inc_negative_thread(self):
        with self.assertRaises(ValueError):
            vc_inc(VectorClock(), -1)

    def test_join(self):
        self.assertEqual(vc_join(VectorClock([1, 0, 3]), VectorClock([0, 2])).to_json(), [1, 2, 3])

    def test_join_with_reports_change(self):
        clock = VectorClock([2, 2])
        self.assertFalse(clock.join_with(VectorClock([1, 2])))
        self.assertTrue(clock.join_with(VectorClock([0, 0, 1])))
        self.assertEqual(clock.to_json(), [2, 2, 1])

    def test_leq(self):
        self.assertTrue(vc_leq(VectorClock([1, 0]), VectorClock([1, 1])))
        self.assertTrue(vc_leq(VectorClock([1, 0, 0]), VectorClock([1])))
        self.assertFalse(vc_leq(VectorClock([0, 2]), VectorClock([5, 1])))
        self.assertTrue(vc_leq(VectorClock(), VectorClock()))

    def test_equality_ignores_trailing_zeros(self):
        self.assertEqual(VectorClock([1, 0, 0]), VectorClock([1]))
        self.assertNotEqual(VectorClock([1, 0, 1]), VectorClock([1]))

    def test_copy_is_independent(self):
        clock = VectorClock([1, 1])
        clone = vc_copy(clock)
        clone.increment(0)
        self.assertEqual(clock.to_json(), [1, 1])
        self.assertEqual(clone.to_json(), [2, 1])

    def test_padded(self):
        self.assertEqual(VectorClock([3]).padded(3), [3, 0, 0])

    def test_overflow(self):
        clock = VectorClock([MAX_STAMP])
        with self.assertRaises(OverflowError):
            clock.increment(0)


if __name__ == '__main__':
    unittest.main()
