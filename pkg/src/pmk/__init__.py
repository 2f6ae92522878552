"""Exact premodular data: cyclotomic arithmetic, fusion rings, verification and
the rank-4 classification replay."""

__version__ = "0.1.0"
