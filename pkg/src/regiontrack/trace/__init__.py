"""轨迹模型、文本格式与随机生成"""
