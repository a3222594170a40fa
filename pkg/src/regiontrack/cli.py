"""
RegionTrack 命令行接口

退出码：check/oracle 中 0 = 可串行化、1 = 不可串行化；
2 = 用法/IO/解析/配置错误；compare 中 3 = 引擎间关系不成立。
"""

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Any, List, Optional

from .core.config import ENGINE_NAMES, OUTPUT_FORMATS, CheckerConfig, load_config
from .core.errors import ConfigError, RegionTrackError
from .core.runner import RegionTrackRunner
from .trace.parser import serialize_trace, write_trace_file


EXIT_SERIALIZABLE = 0
EXIT_NONSERIALIZABLE = 1
EXIT_ERROR = 2
EXIT_BREACH = 3

SEED_RANGE = re.compile(r'^(\d+)\.\.(\d+)$')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='regiontrack', description='RegionTrack atomicity checker CLI')
    parser.add_argument('--config', '-c', help='配置文件路径（JSON 或 YAML）')
    parser.add_argument('--debug', action='store_true', help='启用调试日志')

    # 各子命令共用的参数
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument('--engine', '-e', choices=ENGINE_NAMES, help='分析引擎')
    shared.add_argument('--format', '-f', choices=OUTPUT_FORMATS, help='输出格式')
    shared.add_argument('--seed', type=int, help='随机种子')
    shared.add_argument('--out', '-o', help='输出文件路径（默认标准输出）')
    shared.add_argument('--threads-hint', type=int, help='预分配的线程数')

    generator = argparse.ArgumentParser(add_help=False)
    generator.add_argument('--threads', type=int, help='线程数')
    generator.add_argument('--events', type=int, help='读写/加解锁事件数')
    generator.add_argument('--variables', type=int, help='变量数')
    generator.add_argument('--locks', type=int, help='锁数')
    generator.add_argument('--labels', type=int, help='区域标签数')
    generator.add_argument('--p-region', type=float, help='开启区域的概率')
    generator.add_argument('--p-close', type=float, help='关闭区域的概率')

    subparsers = parser.add_subparsers(dest='command', help='可用命令')

    check_parser = subparsers.add_parser('check', parents=[shared], help='检查轨迹')
    check_parser.add_argument('path', help='轨迹文件')
    check_parser.add_argument('--exclude', action='append', default=[], help='排除的区域标签')

    oracle_parser = subparsers.add_parser('oracle', parents=[shared], help='运行暴力 oracle')
    oracle_parser.add_argument('path', help='轨迹文件')

    compare_parser = subparsers.add_parser('compare', parents=[shared, generator],
                                           help='差分比较所有引擎与 oracle')
    compare_parser.add_argument('path', nargs='?', help='轨迹文件')
    compare_parser.add_argument('--random', help='种子区间 A..B（含两端）')
    compare_parser.add_argument('--workers', type=int, help='并行线程数')

    subparsers.add_parser('generate', parents=[shared, generator], help='生成随机轨迹')

    refine_parser = subparsers.add_parser('refine', parents=[shared], help='迭代精化')
    refine_parser.add_argument('path', help='轨迹文件')
    refine_parser.add_argument('--threshold', type=int, help='连续无新违例的轮数')
    refine_parser.add_argument('--exclude', action='append', default=[], help='初始排除的区域标签')

    stats_parser = subparsers.add_parser('stats', parents=[shared], help='输出运行统计')
    stats_parser.add_argument('path', help='轨迹文件')

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """主函数，返回退出码"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_ERROR

    if not args.command:
        parser.print_help()
        return EXIT_ERROR

    try:
        config = load_cli_config(args)
        with RegionTrackRunner(config) as runner:
            handler = HANDLERS[args.command]
            return handler(runner, args)
    except (RegionTrackError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


def load_cli_config(args) -> CheckerConfig:
    """加载配置并应用命令行覆盖"""
    config = CheckerConfig.from_file(args.config) if args.config else load_config()

    if args.debug:
        config.debug = True
        config.logging.level = 'DEBUG'
    if getattr(args, 'threads_hint', None) is not None:
        if args.threads_hint < 0:
            raise ConfigError("--threads-hint must be non-negative")
        config.threads_hint = args.threads_hint

    return config


def _format(runner: RegionTrackRunner, args) -> str:
    return args.format or runner.config.output_format


def emit(args, text: str):
    """写到 --out 指定的文件或标准输出"""
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        target = Path(args.out)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding='utf-8')
    else:
        sys.stdout.write(text)


def _dump(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False)


def handle_check(runner: RegionTrackRunner, args) -> int:
    """处理检查命令"""
    trace = runner.load_trace(args.path)
    report = runner.check(trace, args.engine, args.exclude)
    if _format(runner, args) == 'human':
        emit(args, "\n".join(report.human_lines()))
    else:
        emit(args, report.to_json())
    return EXIT_NONSERIALIZABLE if report.non_serializable else EXIT_SERIALIZABLE


def handle_oracle(runner: RegionTrackRunner, args) -> int:
    """处理 oracle 命令"""
    trace = runner.load_trace(args.path)
    result = runner.oracle(trace)
    if _format(runner, args) == 'human':
        verdict = "non-serializable" if result["nonserializable"] else "serializable"
        lines = [f"oracle verdict={verdict}"]
        lines.extend(
            f"violation thread={v['thread']} ordinal={v['ordinal']} label={v['label']}"
            for v in result["violations"])
        emit(args, "\n".join(lines))
    else:
        emit(args, _dump(result))
    return EXIT_NONSERIALIZABLE if result["nonserializable"] else EXIT_SERIALIZABLE


def _generator_config(runner: RegionTrackRunner, args):
    return runner.generator_config(
        threads=args.threads,
        events=args.events,
        variables=args.variables,
        locks=args.locks,
        region_labels=args.labels,
        p_region=args.p_region,
        p_close=args.p_close,
    )


def handle_compare(runner: RegionTrackRunner, args) -> int:
    """处理比较命令：单条轨迹或一段随机种子"""
    if bool(args.path) == bool(args.random):
        raise ConfigError("compare needs exactly one of PATH or --random A..B")

    if args.random:
        match = SEED_RANGE.match(args.random)
        if not match:
            raise ConfigError(f"invalid seed range: {args.random}")
        start, stop = int(match.group(1)), int(match.group(2))
        if start > stop:
            raise ConfigError(f"empty seed range: {args.random}")
        result = runner.compare_random(_generator_config(runner, args), start, stop, args.workers)
    else:
        result = runner.compare(runner.load_trace(args.path))

    if _format(runner, args) == 'human':
        emit(args, "\n".join(result.human_lines()))
    else:
        emit(args, _dump(result.to_dict()))
    return EXIT_SERIALIZABLE if result.ok else EXIT_BREACH


def handle_generate(runner: RegionTrackRunner, args) -> int:
    """处理生成命令"""
    trace = runner.generate(_generator_config(runner, args), args.seed or 0)
    if args.out:
        write_trace_file(trace, args.out)
    else:
        sys.stdout.write(serialize_trace(trace))
    return EXIT_SERIALIZABLE


def handle_refine(runner: RegionTrackRunner, args) -> int:
    """处理迭代精化命令"""
    trace = runner.load_trace(args.path)
    result = runner.refine(trace, args.engine, args.threshold, args.exclude)
    if _format(runner, args) == 'human':
        emit(args, "\n".join(result.human_lines()))
    else:
        emit(args, _dump(result.to_dict()))
    return EXIT_SERIALIZABLE


def handle_stats(runner: RegionTrackRunner, args) -> int:
    """处理统计命令"""
    trace = runner.load_trace(args.path)
    stats = runner.stats(trace, args.engine)
    if _format(runner, args) == 'human':
        emit(args, "\n".join(f"{key}={value}" for key, value in stats.items()))
    else:
        emit(args, _dump(stats))
    return EXIT_SERIALIZABLE


HANDLERS = {
    'check': handle_check,
    'oracle': handle_oracle,
    'compare': handle_compare,
    'generate': handle_generate,
    'refine': handle_refine,
    'stats': handle_stats,
}


if __name__ == '__main__':
    sys.exit(main())
