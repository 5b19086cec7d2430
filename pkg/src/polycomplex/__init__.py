"""Exact computations with bicomplexes, zigzag-algebra complexes and tricomplexes."""

__version__ = "0.1.0"
