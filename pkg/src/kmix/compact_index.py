"""Compact k-mismatch and k-wildcard indexes.

Both keep an errata tree only up to level k-1. The last substitution of a query is
answered from succinct stores attached to the level k-1 tries instead of from another
level of group tries:

* NodeLabelStore, per explicit node v: the suffixes of its off-path subtrees with the
  first character after v removed, in text order. Entry i is recovered from st_rank'
  (which subtree), tree_pointer' (subtree by rank) and modified_rank' (position inside
  the subtree); label'[i] = n - 1 - |S'_{v,i}|.
* HeavyLabelStore, per heavy path C: the strings branching off C with the branching
  character overwritten by the heavy character, read from the top of C.
* DiffStore: where the removed character changes between consecutive entries of a node,
  so entries equal to the pattern's own character are skipped a block at a time.
"""

from __future__ import annotations

import logging
from collections import Counter
from functools import cmp_to_key

from kmix.core.config import settings
from kmix.core.errors import SelfCheckError
from kmix.errata import ErrataTree
from kmix.strings import ModifiedFragment
from kmix.succinct import BitVector, IncreasingSeq
from kmix.trie.compact import CompactTrie, NodeRef
from kmix.trie.kangaroo import PatternComparer, TextComparer, compare_full
from kmix.trie.sampled import SampledTrie
from kmix.trie.suffix_tree import SuffixTreeIndex

logger = logging.getLogger(__name__)


class SubtreeRankStore:
    """A merged order over several subtrees of one trie.

    `groups` lists the subtree roots; `merged[i]` is the group of the i-th entry of the
    merged order. Inside a group the merged order must agree with the trie order.
    """

    def __init__(self, trie: CompactTrie, groups: list[int], merged: list[int]):
        self.trie = trie
        self.groups = groups
        sizes = Counter(merged)
        by_rank = sorted(range(len(groups)), key=lambda g: (-sizes[g], g))
        rank_of = {g: r + 1 for r, g in enumerate(by_rank)}
        self.st_rank = [rank_of[g] for g in merged]
        self.tree_pointer = by_rank
        positions: dict[int, list[int]] = {g: [] for g in range(len(groups))}
        for i, g in enumerate(merged):
            positions[g].append(i + 1)
        self.modified_rank = {
            g: IncreasingSeq(pos, len(merged)) for g, pos in positions.items() if pos
        }

    def __len__(self) -> int:
        return len(self.st_rank)

    def group(self, i: int) -> int:
        return self.tree_pointer[self.st_rank[i] - 1]

    def entry(self, i: int) -> int:
        """Trie entry of the i-th element of the merged order."""
        g = self.group(i)
        a = self.modified_rank[g].rank(i + 1)
        u = self.groups[g]
        return self.trie.order[self.trie.lo[u] + a - 1]

    def rank_bits(self) -> int:
        """Sum of ceil(log2 st_rank') over all entries."""
        return sum((r - 1).bit_length() for r in self.st_rank)

    def seq_bits(self) -> int:
        return sum(s.bits() for s in self.modified_rank.values())


class DiffStore:
    """diff[i] = 1 iff entries i and i+1 (1-based) have different removed characters."""

    def __init__(self, chars: list[int]):
        self.size = len(chars)
        self.bits = BitVector([int(a != b) for a, b in zip(chars, chars[1:], strict=False)])

    def next_change(self, i: int) -> int:
        """First 0-based entry after the block of equal characters containing entry i."""
        r = self.bits.rank(1, i)
        if r + 1 > self.bits.ones:
            return self.size
        return self.bits.select(1, r + 1)


class NodeLabelStore:
    """Trimmed off-path suffixes of one explicit node, ordered as text suffixes."""

    def __init__(self, trie: CompactTrie, node: int, off_path: list[tuple[int, int]]):
        self.trie = trie
        self.node = node
        self.depth = trie.depth[node]
        self.chars = [c for c, _ in off_path]
        index = trie.index
        entries = []
        for g, (_, u) in enumerate(off_path):
            for e in trie.entries_below(NodeRef(u, trie.depth[u])):
                entries.append((index.suffix_rank(trie.strings[e].start + self.depth + 1), g))
        entries.sort()
        merged = [g for _, g in entries]
        self.ranks = SubtreeRankStore(trie, [u for _, u in off_path], merged)
        self.diff = DiffStore([self.chars[g] for g in merged])
        n = len(trie.text)
        self.sampled = SampledTrie(
            index, len(merged), lambda i: ModifiedFragment(self.label_prime(i) + 1, n)
        )

    def __len__(self) -> int:
        return len(self.ranks)

    def label_prime(self, i: int) -> int:
        return self.trie.strings[self.ranks.entry(i)].start + self.depth

    def char(self, i: int) -> int:
        """The removed character c_{v,i}."""
        return self.chars[self.ranks.group(i)]


class HeavyLabelStore:
    """1-modified strings branching off one heavy path, read from the top of the path."""

    def __init__(
        self, trie: CompactTrie, path_id: int, off_path: dict[int, list[tuple[int, int]]]
    ):
        self.trie = trie
        nodes = trie.paths[path_id]
        self.top_depth = trie.depth[nodes[0]]
        self.main = trie.heavy_string(nodes[0])
        text = trie.text
        # (node depth, heavy character, subtree root) per group, by depth then character
        self.members: list[tuple[int, int, int]] = []
        for v in nodes:
            for _, u in off_path.get(v, []):
                d_v = trie.depth[v]
                self.members.append((d_v, self.main.char_at(text, d_v), u))
        strings, groups = [], []
        for g, (d_v, b_v, u) in enumerate(self.members):
            for e in trie.entries_below(NodeRef(u, trie.depth[u])):
                strings.append(self._modify(trie.strings[e], d_v, b_v))
                groups.append(g)
        builder = TextComparer(trie.index)

        def order(a: int, b: int) -> int:
            c = compare_full(builder, strings[a], strings[b])
            return c if c else (strings[a].start > strings[b].start) - (
                strings[a].start < strings[b].start
            )

        perm = sorted(range(len(strings)), key=cmp_to_key(order))
        roots = [u for _, _, u in self.members]
        self.ranks = SubtreeRankStore(trie, roots, [groups[i] for i in perm])
        self.sampled = SampledTrie(trie.index, len(perm), self.string, decomposed=True)

    def __len__(self) -> int:
        return len(self.ranks)

    def _modify(self, s: ModifiedFragment, d_v: int, b_v: int) -> ModifiedFragment:
        return s.shift(self.top_depth).set_char(self.trie.text, d_v - self.top_depth, b_v)

    def branch_depth(self, i: int) -> int:
        return self.members[self.ranks.group(i)][0]

    def string(self, i: int) -> ModifiedFragment:
        """S'_{C,i}."""
        d_v, b_v, _ = self.members[self.ranks.group(i)]
        return self._modify(self.trie.strings[self.ranks.entry(i)], d_v, b_v)

    def label(self, i: int) -> int:
        """label_C[i] = n - 1 - |S'_{C,i}|."""
        return len(self.trie.text) - 1 - len(self.string(i))


class SplicedComparer:
    """Compares stored strings with head + tail, addressed as the plain range [0..length).

    `head` is a stored string, `tail` a fragment of the query pattern.
    """

    def __init__(
        self,
        text_cmp: TextComparer,
        pattern_cmp: PatternComparer,
        head: ModifiedFragment,
        tail: ModifiedFragment,
    ):
        self.text = text_cmp.text
        self.text_cmp = text_cmp
        self.pattern_cmp = pattern_cmp
        self.head = head
        self.tail = tail

    def __len__(self) -> int:
        return len(self.head) + len(self.tail)

    def char(self, q: ModifiedFragment, offset: int) -> int:
        y = q.start + offset
        if y < len(self.head):
            return self.head.char_at(self.text, y)
        return self.pattern_cmp.char(self.tail, y - len(self.head))

    def lcp(self, s: ModifiedFragment, q: ModifiedFragment, cap: int | None = None) -> int:
        x, end = q.start, q.end
        split = len(self.head)
        total = 0
        if x < split:
            part = self.head.shift(x).truncate(min(split, end) - x)
            got = self.text_cmp.lcp(s, part, cap)
            if got < len(part) or (cap is not None and got >= cap):
                return got
            total = len(part)
            s = s.shift(total)
            x = split
        if x >= end:
            return total
        rest = self.tail.shift(x - split).truncate(end - x)
        budget = None if cap is None else cap - total
        return total + self.pattern_cmp.lcp(s, rest, budget)


class _StoreQuery:
    """Collects labels from the stores while an errata walk runs."""

    def __init__(self, index: _StoredErrata, comparer: PatternComparer):
        self.index = index
        self.comparer = comparer
        self.m = len(comparer.pattern)
        self.hits: list[int] = []

    def off_path(self, trie_id: int, node: int, e: int, base: int, exclude: int | None) -> None:
        store = self.index.node_stores.get((trie_id, node))
        if store is None:
            return
        shift = self.index.tree.tries[trie_id].shift
        rest = ModifiedFragment(base + e + 1, self.m)
        lo, hi = store.sampled.terminal_range(self.comparer, rest)
        i = lo
        while i < hi:
            if exclude is not None and store.char(i) == exclude:
                i = store.diff.next_change(i)
                continue
            self.hits.append(store.label_prime(i) - store.depth - shift)
            i += 1

    def on_path(self, trie_id: int, path_id: int, d: int, e: int, base: int) -> None:
        store = self.index.path_stores.get((trie_id, path_id))
        if store is None:
            return
        et = self.index.tree.tries[trie_id]
        top = store.top_depth
        spliced = SplicedComparer(
            self.index.text_cmp,
            self.comparer,
            store.main.shift(top).truncate(e - top),
            ModifiedFragment(base + e, self.m),
        )
        lo, hi = store.sampled.terminal_range(spliced, ModifiedFragment(0, len(spliced)))
        for i in range(lo, hi):
            if d <= store.branch_depth(i) < e:
                self.hits.append(store.label(i) + 1 - top - et.shift)


class _StoredErrata:
    """An errata tree up to level k-1 plus node stores on its last level."""

    def __init__(self, text: bytes, k: int, *, wildcard: bool, host: SuffixTreeIndex | None):
        if k < 1:
            raise ValueError(f"k must be at least 1, got {k}")
        self.text = text
        self.k = k
        self.host = host or SuffixTreeIndex(text)
        self.text_cmp = TextComparer(self.host.index)
        self.tree = ErrataTree(self.host, list(range(len(text))), k - 1, wildcard=wildcard)
        self.node_stores: dict[tuple[int, int], NodeLabelStore] = {}
        self.path_stores: dict[tuple[int, int], HeavyLabelStore] = {}
        for tid in self.tree.tries_at(k - 1):
            trie = self.tree.tries[tid].trie
            off = {}
            for v in range(trie.size):
                kids = sorted((c, u) for c, u in trie.children[v].items() if u != trie.heavy[v])
                if kids:
                    off[v] = kids
                    self.node_stores[(tid, v)] = NodeLabelStore(trie, v, kids)
            if not wildcard:
                for path_id, (_, nodes) in enumerate(trie.heavy_paths()):
                    if any(v in off for v in nodes):
                        self.path_stores[(tid, path_id)] = HeavyLabelStore(trie, path_id, off)

    def _run(self, pattern: bytes, wildcard_byte: int | None) -> list[int]:
        m = len(pattern)
        n = len(self.text)
        if m == 0:
            return list(range(n + 1))
        if m > n:
            return []
        comparer = self.host.comparer(pattern)
        stores = _StoreQuery(self, comparer)
        budget = 0 if wildcard_byte is not None else self.k
        result = self.tree.query(
            comparer, 0, budget, wildcard_byte=wildcard_byte, stores=stores
        )
        hits = result.labels + stores.hits
        counts = Counter(hits)
        if settings.checks_enabled and any(c > 1 for c in counts.values()):
            raise SelfCheckError("compact index reported an occurrence more than once")
        logger.debug(
            "compact query m=%d: %d from loci, %d from stores",
            m,
            len(result.labels),
            len(stores.hits),
        )
        return sorted(hits)

    def stats(self) -> dict[str, int]:
        return {
            "tries": len(self.tree.tries),
            "terminals": self.tree.terminal_count(),
            "last_level_terminals": self.tree.terminal_count(self.k - 1),
            "node_stores": len(self.node_stores),
            "path_stores": len(self.path_stores),
            "st_rank_bits": sum(s.ranks.rank_bits() for s in self.node_stores.values()),
            "iseq_bits": sum(s.ranks.seq_bits() for s in self.node_stores.values())
            + sum(s.ranks.seq_bits() for s in self.path_stores.values()),
        }


class CompactIndex(_StoredErrata):
    """k-mismatch index from a (k-1)-errata tree and last-level stores."""

    def __init__(self, text: bytes, k: int, *, host: SuffixTreeIndex | None = None):
        super().__init__(text, k, wildcard=False, host=host)
        logger.info("compact index: n=%d k=%d %s", len(text), k, self.stats())

    def query(self, pattern: bytes) -> list[int]:
        return self._run(pattern, None)


class WildcardIndex(_StoredErrata):
    """Pattern matching with up to k wildcards in the pattern."""

    def __init__(
        self,
        text: bytes,
        k: int,
        wildcard_byte: int | None = None,
        *,
        host: SuffixTreeIndex | None = None,
    ):
        self.wildcard_byte = settings.wildcard_byte if wildcard_byte is None else wildcard_byte
        if self.wildcard_byte in text:
            raise ValueError(
                f"text contains the wildcard byte {bytes([self.wildcard_byte])!r}"
            )
        super().__init__(text, k, wildcard=True, host=host)
        logger.info("wildcard index: n=%d k=%d %s", len(text), k, self.stats())

    def query(self, pattern: bytes) -> list[int]:
        count = pattern.count(self.wildcard_byte)
        if count > self.k:
            raise ValueError(f"pattern holds {count} wildcards, the index allows {self.k}")
        return self._run(pattern, self.wildcard_byte)


def build_wildcard_index(text: bytes, k: int, wildcard_byte: int | None = None) -> WildcardIndex:
    return WildcardIndex(text, k, wildcard_byte)


def query_wildcard(index: WildcardIndex, pattern: bytes) -> list[int]:
    return index.query(pattern)


def build_compact_mismatch(text: bytes, k: int) -> CompactIndex:
    return CompactIndex(text, k)


def query_compact(index: CompactIndex, pattern: bytes) -> list[int]:
    return index.query(pattern)
