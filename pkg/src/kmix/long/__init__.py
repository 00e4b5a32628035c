"""Index for long patterns: anchors, directional errata trees, nearly periodic windows."""

from kmix.long.anchors import build_anchors, build_sync_set, pattern_anchors
from kmix.long.index import LongIndex, build_long_index, query_long

__all__ = [
    "LongIndex",
    "build_anchors",
    "build_long_index",
    "build_sync_set",
    "pattern_anchors",
    "query_long",
]
