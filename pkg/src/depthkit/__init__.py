"""Exact Hasse-Herbrand functions, depth maps and verification harnesses"""
__version__ = "0.1.0"
