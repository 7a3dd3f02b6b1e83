"""Exact computations with congruence subgroups of PSL2(Z) and Aut+(F2)."""

__version__ = "0.1.0"
