"""
配置加载测试
"""

import os
import sys
import tempfile
import unittest
from pathlib import Path
from unittest import mock

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from regiontrack.core.config import CheckerConfig, load_config
from regiontrack.core.errors import ConfigError


class TestCheckerConfig(unittest.TestCase):

    def test_defaults(self):
        config = CheckerConfig()
        self.assertEqual(config.default_engine, "regiontrack-full")
        self.assertEqual(config.output_format, "json")
        self.assertEqual(config.refine.threshold, 2)
        self.assertEqual(config.oracle.max_closure_events, 200)
        self.assertEqual(config.oracle.max_swap_events, 12)

    def test_from_dict(self):
        config = CheckerConfig.from_dict({
            "default_engine": "velodrome",
            "output_format": "human",
            "refine": {"threshold": 3},
            "compare": {"workers": 4, "show_progress": False},
        })
        self.assertEqual(config.default_engine, "velodrome")
        self.assertEqual(config.refine.threshold, 3)
        self.assertEqual(config.compare.workers, 4)
        self.assertEqual(config.to_dict()["compare"], {"workers": 4, "show_progress": False})

    def test_invalid_values(self):
        with self.assertRaises(ConfigError):
            CheckerConfig(default_engine="nope")
        with self.assertRaises(ConfigError):
            CheckerConfig.from_dict({"output_format": "xml"})
        with self.assertRaises(ConfigError):
            CheckerConfig.from_dict({"oracle": {"unknown": 1}})

    def test_yaml_and_json_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            for name in ("regiontrack.yaml", "regiontrack.json"):
                path = os.path.join(tmp, name)
                original = CheckerConfig(default_engine="aerodrome")
                original.generator.threads = 4
                original.save_to_file(path)
                loaded = CheckerConfig.from_file(path)
                self.assertEqual(loaded.default_engine, "aerodrome")
                self.assertEqual(loaded.generator.threads, 4)
                self.assertEqual(loaded.to_dict(), original.to_dict())

    def test_missing_file_gives_defaults(self):
        config = CheckerConfig.from_file("/nonexistent/regiontrack.yaml")
        self.assertEqual(config.to_dict(), CheckerConfig().to_dict())

    def test_from_env(self):
        env = {
            "REGIONTRACK_ENGINE": "naive-blame",
            "REGIONTRACK_LOG_LEVEL": "debug",
            "REGIONTRACK_WORKERS": "3",
            "REGIONTRACK_MAX_CLOSURE_EVENTS": "50",
        }
        with mock.patch.dict(os.environ, env):
            config = CheckerConfig.from_env()
        self.assertEqual(config.default_engine, "naive-blame")
        self.assertEqual(config.logging.level, "DEBUG")
        self.assertEqual(config.compare.workers, 3)
        self.assertEqual(config.oracle.max_closure_events, 50)

    def test_from_env_rejects_unknown_engine(self):
        with mock.patch.dict(os.environ, {"REGIONTRACK_ENGINE": "bogus"}):
            with self.assertRaises(ConfigError):
                CheckerConfig.from_env()

    def test_load_config_with_path(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "custom.json")
            CheckerConfig(output_format="human").save_to_file(path)
            self.assertEqual(load_config(path).output_format, "human")


if __name__ == '__main__':
    unittest.main()
