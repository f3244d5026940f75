"""Exact and simulated laws of "random long cycle, then random transpositions" on S_n."""

__version__ = "0.1.0"
