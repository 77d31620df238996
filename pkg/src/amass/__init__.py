"""Exact computations around average 2-torsion in class groups of monogenised fields."""

__version__ = "0.1.0"
