"""k-mismatch and k-wildcard text indexes with brute-force oracles."""

__version__ = "0.1.0"
