"""Models package for terms, values and element theories"""
