"""Nearly periodic occurrences, found by interval stabbing per Lyndon root.

A window T[j..e] that starts inside a tau-run (or up to k misperiods before it) and
ends inside the run (or up to k misperiods after it) differs from the periodic
extension of the run in exactly a + b positions, a to the left and b to the right.
For every run, every (a, b) with a + b <= k and every residue t = (d - j) mod p of the
window start against the run's Lyndon root position d, the lengths m for which such
a window exists form an interval; it is stored under the key (root, a + b, t) with the
data needed to list the window starts.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass

from kmix.core.config import settings
from kmix.core.errors import SelfCheckError
from kmix.strings import ModifiedFragment, Run, hamming, lyndon_root, misper, smallest_period
from kmix.succinct import StabStruct
from kmix.trie.compact import CompactTrie
from kmix.trie.kangaroo import PatternComparer
from kmix.trie.suffix_tree import MatchingStatistics, SuffixTreeIndex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Progression:
    """Window starts alpha, alpha+p, ..., beta whose last position lies in [end_lo..end_hi]."""

    alpha: int
    beta: int
    end_lo: int
    end_hi: int
    period: int

    def starts(self, m: int) -> range:
        lo = max(self.alpha, self.end_lo - m + 1)
        hi = min(self.beta, self.end_hi - m + 1)
        if lo > hi:
            return range(0)
        first = self.alpha + -(-(lo - self.alpha) // self.period) * self.period
        return range(first, hi + 1, self.period)


def _residue_bounds(lo: int, hi: int, d: int, t: int, p: int) -> tuple[int, int] | None:
    """Smallest and largest j in [lo..hi] with (d - j) mod p == t."""
    if lo > hi:
        return None
    r = (d - t) % p
    first = lo + (r - lo) % p
    if first > hi:
        return None
    last = hi - (hi - r) % p
    return first, last


class NearPeriodicIndex:
    def __init__(
        self,
        text: bytes,
        gamma: int,
        k: int,
        runs: list[Run],
        *,
        host: SuffixTreeIndex | None = None,
    ):
        self.text = text
        self.n = len(text)
        self.gamma = gamma
        self.k = k
        self.tau = max(1, gamma // 3)
        self.host = host or SuffixTreeIndex(text)
        self.runs = runs
        self.roots: CompactTrie | None = None
        self.stabs: dict[tuple[int, int, int], StabStruct] = {}
        self.interval_count = 0
        if runs:
            self._build()
        logger.info(
            "near-periodic index: runs=%d structures=%d intervals=%d",
            len(runs),
            len(self.stabs),
            self.interval_count,
        )

    def _build(self) -> None:
        n, k = self.n, self.k
        strings = []
        for run in self.runs:
            d = run.start + run.lyndon_offset
            strings.append(ModifiedFragment(d, d + run.period))
        self.roots = CompactTrie(self.host.index, strings, list(range(len(self.runs))))
        node_of = {self.roots.labels[e]: self.roots.term_node[e] for e in range(len(strings))}
        pending: dict[tuple[int, int, int], list[tuple[int, int, Progression]]] = defaultdict(list)
        for r_id, run in enumerate(self.runs):
            p, x = run.period, run.start
            d = x + run.lyndon_offset
            left, right = misper(self.text, x, x + p, k + 1)
            # ell[a], r[b] are 1-based; sentinels close short sides
            ell = [0] + left[::-1] + ([-1] if len(left) <= k else [])
            r = [0] + right + ([n] if len(right) <= k else [])
            ell[0] = r[1] - 1
            r[0] = ell[1] + 1
            for a in range(len(ell) - 1):
                for b in range(len(r) - 1):
                    if a + b > k:
                        continue
                    for t in range(p):
                        bounds = _residue_bounds(ell[a + 1] + 1, ell[a], d, t, p)
                        if bounds is None:
                            continue
                        alpha, beta = bounds
                        low = 0 if a == b == 0 else r[b] - beta + 1
                        high = r[b + 1] - alpha
                        if low > high:
                            continue
                        payload = Progression(alpha, beta, r[b], r[b + 1] - 1, p)
                        pending[(node_of[r_id], a + b, t)].append((low, high, payload))
        for key, intervals in pending.items():
            self.stabs[key] = StabStruct(intervals)
            self.interval_count += len(intervals)

    def _root_node(self, comparer: PatternComparer, d: int, p: int) -> int | None:
        assert self.roots is not None
        ref = self.roots.tree_lcp_rooted(comparer, ModifiedFragment(d, d + p))
        if ref.depth != p or not self.roots.is_explicit(ref):
            return None
        if not self.roots.terminals[ref.node]:
            return None
        return ref.node

    def query(
        self,
        pattern: bytes,
        comparer: PatternComparer | None = None,
        ms: MatchingStatistics | None = None,
    ) -> list[int]:
        """Window starts reported by every block; a start may repeat."""
        if self.roots is None:
            return []
        m = len(pattern)
        comparer = comparer or self.host.comparer(pattern)
        ms = ms or self.host.matching_statistics(pattern)
        gamma, k = self.gamma, self.k
        out: list[int] = []
        for i in range(k + 1):
            lo = i * gamma
            if lo + gamma > m or ms.lengths[lo] < gamma:
                continue
            p = smallest_period(pattern[lo : lo + gamma])
            if 3 * p > self.tau:
                continue
            left, right = misper(pattern, lo, lo + p, k + 1)
            x_size = len(left) + len(right)
            if x_size > k:
                continue
            d = lyndon_root(pattern, lo, p)
            node = self._root_node(comparer, d, p)
            if node is None:
                continue
            for h in range(k - x_size + 1):
                stab = self.stabs.get((node, h, d % p))
                if stab is None:
                    continue
                for prog in stab.stab(m):
                    out.extend(prog.starts(m))
        if settings.checks_enabled:
            for j in out:
                if hamming(self.text[j : j + m], pattern) > k:
                    raise SelfCheckError(f"near-periodic start {j} exceeds {k} mismatches")
        return out
