"""Terminal ranges in sorted lists of modified suffixes through a sampled trie.

Only every stride-th string (plus the first and the last) is kept in a compact trie.
A TreeLCP query on that trie brackets the answer between two samples; the exact ends
are found by binary search inside the gaps, reading strings back through `get`.
"""

from __future__ import annotations

from collections.abc import Callable

from kmix.strings import ModifiedFragment
from kmix.trie.compact import CompactTrie, NodeRef
from kmix.trie.kangaroo import Comparer, compare
from kmix.trie.modified import ModifiedTrieLcp
from kmix.trie.text_lcp import TextIndex, ilog2


def sample_positions(size: int, stride: int) -> list[int]:
    if size == 0:
        return []
    return sorted(set(range(0, size, stride)) | {size - 1})


class SampledTrie:
    """Sampled compact trie over `size` lexicographically sorted strings."""

    def __init__(
        self,
        index: TextIndex,
        size: int,
        get: Callable[[int], ModifiedFragment],
        *,
        stride: int | None = None,
        decomposed: bool = False,
    ):
        self.size = size
        self.get = get
        self.stride = stride or max(ilog2(max(index.n, 1)), 1)
        self.samples = sample_positions(size, self.stride)
        self.trie: CompactTrie | None = None
        self.lcp_support: ModifiedTrieLcp | None = None
        self.probes = 0
        if self.samples:
            self.trie = CompactTrie(
                index, [get(i) for i in self.samples], list(self.samples), presorted=True
            )
            if decomposed:
                self.lcp_support = ModifiedTrieLcp(self.trie)

    def _locus(self, comparer: Comparer, q: ModifiedFragment) -> NodeRef:
        if self.lcp_support is not None:
            return self.lcp_support.query(comparer, q)
        return self.trie.tree_lcp_rooted(comparer, q)

    def _insertion(self, comparer: Comparer, q: ModifiedFragment, x: NodeRef) -> int:
        """Sample rank at which q would be inserted, given its locus below the full depth."""
        trie = self.trie
        c = comparer.char(q, x.depth)
        if not trie.is_explicit(x):
            edge = trie.strings[trie.rep[x.node]].char_at(trie.text, x.depth)
            return trie.lo[x.node] if c < edge else trie.hi[x.node]
        pos = trie.lo[x.node] + len(trie.terminals[x.node])
        for ch, child in sorted(trie.children[x.node].items()):
            if ch > c:
                break
            pos += trie.count[child]
        return pos

    def _first(self, comparer: Comparer, q: ModifiedFragment, a: int, b: int, sign: int) -> int:
        """First index in [a, b) whose comparison with q is at least `sign`, or b."""
        while a < b:
            mid = (a + b) // 2
            self.probes += 1
            s, _ = compare(comparer, self.get(mid), q)
            if s < sign:
                a = mid + 1
            else:
                b = mid
        return a

    def terminal_range(self, comparer: Comparer, q: ModifiedFragment) -> tuple[int, int]:
        """Half-open range of strings having q as a prefix."""
        if self.trie is None:
            return 0, 0
        if not len(q):
            return 0, self.size
        samples = self.samples
        last = len(samples)

        def gap(r: int) -> tuple[int, int]:
            lo = samples[r - 1] + 1 if r > 0 else 0
            hi = samples[r] if r < last else self.size
            return lo, hi

        x = self._locus(comparer, q)
        if x.depth == len(q):
            a, b = self.trie.lo[x.node], self.trie.hi[x.node]
            g0, g1 = gap(a)
            lo = self._first(comparer, q, g0, g1, 0)
            g0, g1 = gap(b)
            hi = self._first(comparer, q, g0, g1, 1)
            return lo, hi
        g0, g1 = gap(self._insertion(comparer, q, x))
        lo = self._first(comparer, q, g0, g1, 0)
        hi = self._first(comparer, q, lo, g1, 1)
        return lo, hi
