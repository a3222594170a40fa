"""
RegionTrack 主类：统一的日志设置与各命令入口
"""

import logging
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Union

from .compare import CompareResult, CompareSummary, compare_random, compare_trace
from .config import CheckerConfig, load_config
from .engines import run_engine
from .errors import TraceStructureError
from .refine import RefinementResult, refine
from ..engine.report import Report
from ..oracle.closure import oracle_report
from ..oracle.swap import swap_serializability
from ..trace.generator import GenConfig, generate_random
from ..trace.model import Trace, validate
from ..trace.parser import parse_trace, read_trace_file


class RegionTrackRunner:
    """RegionTrack 主类"""

    def __init__(self, config: Optional[CheckerConfig] = None):
        self.config = config or load_config()
        self.logger = self._setup_logging()
        self.logger.debug("RegionTrack 初始化完成")

    def _setup_logging(self) -> logging.Logger:
        """设置日志；控制台输出到 stderr，stdout 只留给报告"""
        logger = logging.getLogger('regiontrack')
        level = "DEBUG" if self.config.debug else self.config.logging.level
        logger.setLevel(getattr(logging, level))

        formatter = logging.Formatter(self.config.logging.format)

        # 重复创建实例时替换已有处理器
        for handler in list(logger.handlers):
            logger.removeHandler(handler)
            handler.close()

        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

        if self.config.logging.file_path:
            from logging.handlers import RotatingFileHandler
            file_handler = RotatingFileHandler(
                self.config.logging.file_path,
                maxBytes=self.config.logging.max_bytes,
                backupCount=self.config.logging.backup_count
            )
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)

        logger.propagate = False
        return logger

    # 轨迹加载
    def load_trace(self, path: Union[str, Path]) -> Trace:
        """读取并校验轨迹文件"""
        return self._checked(read_trace_file(path), str(path))

    def parse(self, text: str) -> Trace:
        return self._checked(parse_trace(text), "<text>")

    def _checked(self, trace: Trace, origin: str) -> Trace:
        for problem in validate(trace):
            if problem.is_error:
                self.logger.error(f"{origin}: {problem.describe()}")
                raise TraceStructureError(problem.index, problem.rule, problem.message or None)
            self.logger.warning(f"{origin}: {problem.describe()}")
        self.logger.debug(f"{origin}: {len(trace)} 个事件, {len(trace.threads)} 个线程")
        return trace

    # 命令
    def check(self, trace: Trace, engine: Optional[str] = None,
              excluded_labels: Optional[Iterable[str]] = None) -> Report:
        engine = engine or self.config.default_engine
        self.logger.info(f"使用 {engine} 检查 {len(trace)} 个事件")
        report = run_engine(engine, trace, excluded_labels, self.config.threads_hint)
        verdict = "不可串行化" if report.non_serializable else "可串行化"
        self.logger.info(f"{engine}: {verdict}, {len(report.violations)} 个违例")
        return report

    def oracle(self, trace: Trace) -> Dict[str, Any]:
        return oracle_report(trace, self.config.oracle.max_closure_events)

    def swap_check(self, trace: Trace, thread: str, ordinal: int) -> bool:
        """交换枚举判定某个事务能否连续执行"""
        return swap_serializability(trace, (thread, ordinal), self.config.oracle.max_swap_events)

    def compare(self, trace: Trace) -> CompareResult:
        result = compare_trace(trace, self.config.oracle.max_closure_events,
                               threads_hint=self.config.threads_hint)
        self.logger.info("比较完成: " + ("关系成立" if result.ok else f"{len(result.breaches)} 处不成立"))
        return result

    def compare_random(self, gen_config: GenConfig, start: int, stop: int,
                       workers: Optional[int] = None) -> CompareSummary:
        """比较种子 start..stop（含两端）生成的随机轨迹"""
        compare_config = self.config.compare
        return compare_random(
            gen_config,
            range(start, stop + 1),
            limit=self.config.oracle.max_closure_events,
            workers=workers or compare_config.workers,
            show_progress=compare_config.show_progress,
        )

    def refine(self, trace: Trace, engine: Optional[str] = None, threshold: Optional[int] = None,
               seed_labels: Optional[Iterable[str]] = None) -> RefinementResult:
        engine = engine or self.config.default_engine
        if threshold is None:
            threshold = self.config.refine.threshold
        result = refine(trace, engine, threshold, seed_labels, self.config.threads_hint)
        self.logger.info(f"精化结束: {len(result.iterations)} 轮, 排除 {result.excluded or '-'}")
        return result

    def stats(self, trace: Trace, engine: Optional[str] = None) -> Dict[str, int]:
        return self.check(trace, engine).stats_dict()

    def generator_config(self, **overrides) -> GenConfig:
        """以配置中的默认值为基础构造 GenConfig；值为 None 的参数被忽略"""
        defaults = self.config.generator
        values = {
            "threads": defaults.threads,
            "events": defaults.events,
            "variables": defaults.variables,
            "locks": defaults.locks,
            "region_labels": defaults.region_labels,
            "p_region": defaults.p_region,
            "p_close": defaults.p_close,
            "read_weight": defaults.read_weight,
            "write_weight": defaults.write_weight,
            "acquire_weight": defaults.acquire_weight,
            "release_weight": defaults.release_weight,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return GenConfig.build(**values)

    def generate(self, gen_config: GenConfig, seed: int) -> Trace:
        trace = generate_random(gen_config, seed)
        self.logger.info(f"生成轨迹: seed={seed}, {len(trace)} 个事件")
        return trace

    def close(self):
        """关闭日志处理器"""
        for handler in list(self.logger.handlers):
            handler.flush()
        self.logger.debug("RegionTrack 已关闭")

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()
