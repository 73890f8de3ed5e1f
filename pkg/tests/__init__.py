"""Test package for rq-solve"""
