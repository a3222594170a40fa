"""
RegionTrack 异常定义
"""

from typing import Optional


class RegionTrackError(Exception):
    """所有 RegionTrack 异常的基类"""


class TraceFormatError(RegionTrackError, ValueError):
    """轨迹文本格式错误（带行号）"""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class TraceStructureError(RegionTrackError, ValueError):
    """分析时发现的结构错误（带事件序号与规则名）"""

    def __init__(self, index: int, rule: str, message: Optional[str] = None):
        self.index = index
        self.rule = rule
        super().__init__(f"event {index}: {rule}" + (f" ({message})" if message else ""))


class OracleSizeError(RegionTrackError):
    """暴力 oracle 的规模上限被超出"""

    def __init__(self, size: int, limit: int, what: str = "events"):
        self.size = size
        self.limit = limit
        super().__init__(f"oracle size guard exceeded: {size} {what} > {limit}")


class ConfigError(RegionTrackError, ValueError):
    """配置或引擎名非法"""


class EngineMismatchError(RegionTrackError):
    """所选引擎无法完成请求的命令（例如 refine 使用只判定轨迹的引擎）"""
