"""k-mismatch index for patterns of length at least (k+1) * gamma.

For each anchor family t, a forward errata tree holds the suffixes T[a..n) and a
reverse errata tree the reversed prefixes (T[0..a))^R, a in A_t. A query splits the
pattern at every pattern anchor b, asks the forward tree for P[b..m) with k1
mismatches and the reverse tree for (P[0..b))^R with k - k1, and joins the two answers
with orthogonal range reporting over the concatenated terminal labels of both trees.
Nearly periodic occurrences come from NearPeriodicIndex.
"""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from collections.abc import Iterator

import numpy as np

from kmix.core.config import settings
from kmix.core.errors import SelfCheckError
from kmix.errata import ErrataTree, Locus
from kmix.long.anchors import AnchorSets, build_anchors, check_gamma, pattern_anchors
from kmix.long.near_periodic import NearPeriodicIndex
from kmix.succinct import RangeReport2D
from kmix.trie.kangaroo import PatternComparer
from kmix.trie.suffix_tree import SuffixTreeIndex

logger = logging.getLogger(__name__)


def _concatenate(tree: ErrataTree) -> tuple[list[int], np.ndarray, list[int]]:
    """Trie offsets into the concatenated label string, the string, and level ends.

    ends[l] is the length of the prefix holding the tries of level <= l.
    """
    offsets, labels = [], []
    ends = [0] * (tree.k + 1)
    total = 0
    previous_level = 0
    for et in tree.tries:
        if et.level < previous_level:
            raise SelfCheckError("errata tries are not ordered by level")
        previous_level = et.level
        offsets.append(total)
        labels.extend(et.trie.labels[e] for e in et.trie.order)
        total += len(et.trie.order)
        ends[et.level] = total
    for level in range(1, tree.k + 1):
        ends[level] = max(ends[level], ends[level - 1])
    return offsets, np.asarray(labels, dtype=np.int64), ends


class DirectionalErrata:
    """Forward and reverse errata trees over one anchor family, joined per split k1."""

    def __init__(
        self,
        host: SuffixTreeIndex,
        reverse_host: SuffixTreeIndex,
        anchors: list[int],
        k: int,
    ):
        n = host.n
        self.n = n
        self.k = k
        self.forward = ErrataTree(host, anchors, k)
        self.reverse = ErrataTree(reverse_host, [n - a for a in anchors], k)
        self.fwd_offsets, self.fwd_labels, fwd_ends = _concatenate(self.forward)
        self.rev_offsets, self.rev_labels, rev_ends = _concatenate(self.reverse)
        xs_of: dict[int, list[int]] = defaultdict(list)
        for x, a in enumerate(self.fwd_labels.tolist()):
            xs_of[a].append(x)
        ys_of: dict[int, list[int]] = defaultdict(list)
        for y, label in enumerate(self.rev_labels.tolist()):
            ys_of[n - label].append(y)
        self.grids: list[RangeReport2D] = []
        for k1 in range(k + 1):
            x_end, y_end = fwd_ends[k1], rev_ends[k - k1]
            points = [
                (x, y, a)
                for a, xs in xs_of.items()
                for x in xs
                if x < x_end
                for y in ys_of.get(a, [])
                if y < y_end
            ]
            self.grids.append(RangeReport2D(points))
        logger.info(
            "directional errata: anchors=%d points=%s",
            len(anchors),
            [len(g) for g in self.grids],
        )

    def _ranges(
        self, tree: ErrataTree, offsets: list[int], loci: list[Locus]
    ) -> Iterator[tuple[int, int]]:
        for locus in loci:
            trie = tree.tries[locus.trie_id].trie
            lo, hi = trie.lo[locus.ref.node], trie.hi[locus.ref.node]
            if lo < hi:
                yield offsets[locus.trie_id] + lo, offsets[locus.trie_id] + hi - 1

    def query(
        self, forward_cmp: PatternComparer, reverse_cmp: PatternComparer, b: int
    ) -> list[int]:
        """Starts a - b of occurrences anchored at pattern position b."""
        m = len(forward_cmp.pattern)
        out: list[int] = []
        for k1 in range(self.k + 1):
            fwd = self.forward.query(forward_cmp, b, k1)
            if not fwd.loci:
                continue
            rev = self.reverse.query(reverse_cmp, m - b, self.k - k1)
            if not rev.loci:
                continue
            rows = list(self._ranges(self.reverse, self.rev_offsets, rev.loci))
            for x1, x2 in self._ranges(self.forward, self.fwd_offsets, fwd.loci):
                for y1, y2 in rows:
                    out.extend(a - b for a in self.grids[k1].query(x1, x2, y1, y2))
        return out

    def terminal_count(self) -> int:
        return self.forward.terminal_count() + self.reverse.terminal_count()


class LongIndex:
    def __init__(self, text: bytes, gamma: int, k: int):
        if k < 0:
            raise ValueError(f"k must be non-negative, got {k}")
        check_gamma(len(text), gamma, k)
        self.text = text
        self.n = len(text)
        self.gamma = gamma
        self.k = k
        self.host = SuffixTreeIndex(text)
        self.reverse_host = SuffixTreeIndex(text[::-1])
        self.anchors: AnchorSets = build_anchors(text, gamma, k, index=self.host.index)
        self.tau = self.anchors.tau
        self.families: dict[int, DirectionalErrata] = {}
        for t, positions in ((1, self.anchors.a1), (2, self.anchors.a2)):
            if positions:
                self.families[t] = DirectionalErrata(self.host, self.reverse_host, positions, k)
        self.near = NearPeriodicIndex(text, gamma, k, self.anchors.runs, host=self.host)
        self.last_multiplicity: Counter[int] = Counter()
        logger.info("long index: n=%d gamma=%d k=%d %s", self.n, gamma, k, self.stats())

    @property
    def min_pattern_length(self) -> int:
        return (self.k + 1) * self.gamma

    def query(self, pattern: bytes) -> list[int]:
        m = len(pattern)
        if m < self.min_pattern_length:
            raise ValueError(
                f"pattern of length {m} is shorter than (k+1)*gamma={self.min_pattern_length}"
            )
        if m > self.n:
            self.last_multiplicity = Counter()
            return []
        ms = self.host.matching_statistics(pattern)
        forward_cmp = PatternComparer(self.host.index, pattern, ms.lengths, ms.positions)
        reverse_cmp = self.reverse_host.comparer(pattern[::-1])
        found = pattern_anchors(self.anchors, self.host, pattern, ms)
        hits: list[int] = []
        for t, anchors in ((1, found.b1), (2, found.b2)):
            family = self.families.get(t)
            if family is None:
                continue
            for b in anchors:
                hits.extend(family.query(forward_cmp, reverse_cmp, b))
        anchored = len(hits)
        hits.extend(self.near.query(pattern, forward_cmp, ms))
        self.last_multiplicity = Counter(hits)
        logger.debug(
            "long query m=%d: B1=%d B2=%d anchored=%d near=%d",
            m,
            len(found.b1),
            len(found.b2),
            anchored,
            len(hits) - anchored,
        )
        if settings.checks_enabled:
            bound = 64 * (self.k + 1) ** 3
            worst = max(self.last_multiplicity.values(), default=0)
            if worst > bound:
                raise SelfCheckError(f"an occurrence was reported {worst} times (> {bound})")
        return sorted(self.last_multiplicity)

    def stats(self) -> dict[str, int]:
        out = dict(self.anchors.sizes())
        out["tau"] = self.tau
        for t, family in self.families.items():
            out[f"terminals_A{t}"] = family.terminal_count()
            out[f"points_A{t}"] = sum(len(g) for g in family.grids)
        out["stab_intervals"] = self.near.interval_count
        return out


def build_long_index(text: bytes, gamma: int, k: int) -> LongIndex:
    return LongIndex(text, gamma, k)


def query_long(index: LongIndex, pattern: bytes) -> list[int]:
    return index.query(pattern)
