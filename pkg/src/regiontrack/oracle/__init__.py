"""暴力 oracle"""
