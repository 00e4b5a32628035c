"""Parameters for combining the short and the long index, and the index that does it."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from kmix.compact_index import CompactIndex
from kmix.long import LongIndex
from kmix.short_index import ShortIndex

logger = logging.getLogger(__name__)

COMPACT_ONLY = "compact-only"
SPLIT = "split"


@dataclass(frozen=True)
class AutoParams:
    mode: str
    mu: int = 0
    h: int = 0
    gamma: int = 0

    @property
    def compact_only(self) -> bool:
        return self.mode == COMPACT_ONLY


def auto_params(n: int, k: int, sigma: int) -> AutoParams:
    """mu, h and gamma for text length n.

    Even k: mu = floor(log2(n) ** ((2k+2)/(k+2))), h = k/2.
    Odd k: mu = floor(log2(n) ** (2k/(k+1) - eps)), eps = 0.2/(k+1), h = (k-1)/2.
    gamma = floor(mu/(k+1)), at least 2. k = 1 leaves everything to the compact index.
    The recipe does not depend on sigma beyond requiring a non-empty alphabet.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if sigma < 1:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if k == 1:
        return AutoParams(COMPACT_ONLY)
    log_n = math.log2(n) if n > 1 else 1.0
    if k % 2 == 0:
        exponent = (2 * k + 2) / (k + 2)
        h = k // 2
    else:
        exponent = 2 * k / (k + 1) - 0.1 * 2 / (k + 1)
        h = (k - 1) // 2
    mu = min(max(1, math.floor(log_n**exponent)), n)
    gamma = max(2, mu // (k + 1))
    return AutoParams(SPLIT, mu, h, gamma)


class AutoIndex:
    """Routes each query by length: short index, long index, compact index otherwise."""

    def __init__(self, text: bytes, k: int, params: AutoParams | None = None):
        self.text = text
        self.k = k
        self.params = params or auto_params(len(text), k, max(1, len(set(text))))
        self.compact = CompactIndex(text, k)
        self.short: ShortIndex | None = None
        self.long: LongIndex | None = None
        n = len(text)
        if self.params.compact_only:
            return
        try:
            self.short = ShortIndex(text, min(self.params.mu, n), self.params.h, k)
        except ValueError as exc:
            logger.warning("auto index without short index: %s", exc)
        if 2 <= self.params.gamma <= n // (k + 1):
            self.long = LongIndex(text, self.params.gamma, k)
        else:
            logger.warning("auto index without long index: gamma=%d n=%d", self.params.gamma, n)

    def route(self, m: int) -> str:
        if self.short is not None and 1 <= m <= self.short.mu:
            return "short"
        if self.long is not None and m >= self.long.min_pattern_length:
            return "long"
        return "compact"

    def query(self, pattern: bytes) -> list[int]:
        route = self.route(len(pattern))
        logger.debug("auto query m=%d routed to %s", len(pattern), route)
        if route == "short":
            assert self.short is not None
            return self.short.query(pattern)
        if route == "long":
            assert self.long is not None
            return self.long.query(pattern)
        return self.compact.query(pattern)

    def stats(self) -> dict[str, object]:
        return {
            "params": {
                "mode": self.params.mode,
                "mu": self.params.mu,
                "h": self.params.h,
                "gamma": self.params.gamma,
            },
            "compact": self.compact.stats(),
            "short": self.short.stats() if self.short else None,
            "long": self.long.stats() if self.long else None,
        }
