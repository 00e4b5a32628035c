"""Oracles, index registry, file format, parameter recipe and the randomized selftest."""

from kmix.harness.oracles import brute_kmismatch, brute_wildcard, classify_nearly_periodic
from kmix.harness.registry import build_index, get_kind, list_kinds, load_index, register_kind

__all__ = [
    "brute_kmismatch",
    "brute_wildcard",
    "build_index",
    "classify_nearly_periodic",
    "get_kind",
    "list_kinds",
    "load_index",
    "register_kind",
]
