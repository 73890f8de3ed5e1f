"""UI package for parsing, printing and reports"""
