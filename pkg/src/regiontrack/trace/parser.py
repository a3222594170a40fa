"""
轨迹文本格式的解析与序列化

每个非注释行为 `<thread> <op> <operand>`，以空格或制表符分隔；
`#` 开始行尾注释，空行忽略。
"""

import re
from pathlib import Path
from typing import List, Tuple, Union

from .model import OP_TOKENS, EventKind, Trace
from ..core.errors import TraceFormatError


TOKEN_PATTERN = re.compile(r'[A-Za-z0-9_.$-]+')
SEPARATOR = re.compile(r'[ \t]+')


def parse_trace(text: str) -> Trace:
    """解析轨迹文本"""
    records: List[Tuple[str, EventKind, str]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue

        parts = SEPARATOR.split(line)
        if len(parts) == 2 and parts[1] in OP_TOKENS:
            raise TraceFormatError(line_no, "empty operand")
        if len(parts) != 3:
            raise TraceFormatError(line_no, f"malformed line: expected '<thread> <op> <operand>', got {raw.strip()!r}")

        thread, op, operand = parts
        kind = OP_TOKENS.get(op)
        if kind is None:
            raise TraceFormatError(line_no, f"unknown op token: {op}")
        if not TOKEN_PATTERN.fullmatch(thread):
            raise TraceFormatError(line_no, f"invalid thread token: {thread}")
        if not TOKEN_PATTERN.fullmatch(operand):
            raise TraceFormatError(line_no, f"invalid operand token: {operand}")

        records.append((thread, kind, operand))

    return Trace.from_records(records)


def serialize_trace(trace: Trace) -> str:
    """序列化为轨迹文本；空轨迹得到空字符串"""
    if not trace.events:
        return ""
    return "\n".join(event.to_line() for event in trace.events) + "\n"


def read_trace_file(path: Union[str, Path]) -> Trace:
    """读取轨迹文件；非 UTF-8 内容按所在行报告 TraceFormatError"""
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        line = data.count(b"\n", 0, e.start) + 1
        raise TraceFormatError(line, f"invalid UTF-8 byte 0x{data[e.start]:02x}") from e
    return parse_trace(text)


def write_trace_file(trace: Trace, path: Union[str, Path]):
    """写出轨迹文件"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, 'w', encoding='utf-8') as f:
        f.write(serialize_trace(trace))
