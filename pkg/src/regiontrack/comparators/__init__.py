"""比较引擎：Velodrome、AeroDrome、naive-blame"""
