"""Configuration package for constants and the theory registry"""
