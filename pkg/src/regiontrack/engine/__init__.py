"""RegionTrack 分析器与报告"""
