"""Suffix trees, sparse suffix trees and matching statistics."""

from __future__ import annotations

from dataclasses import dataclass

from kmix.strings import ModifiedFragment
from kmix.trie.compact import ROOT, CompactTrie, NodeRef
from kmix.trie.kangaroo import PatternComparer
from kmix.trie.text_lcp import TextIndex


def build_suffix_tree(index: TextIndex) -> CompactTrie:
    """Terminator-free suffix tree; suffixes that prefix others end at internal nodes."""
    n = index.n
    order = index.sa.tolist()
    strings = [ModifiedFragment(i, n) for i in order]
    return CompactTrie(
        index,
        strings,
        order,
        presorted=True,
        adjacent_lcp=index.lcp_values.tolist(),
    )


def build_sparse_suffix_tree(index: TextIndex, positions: list[int]) -> CompactTrie:
    """Compact trie of the suffixes starting at `positions`, labelled by position.

    Position n (the empty suffix) is allowed.
    """
    if not positions:
        raise ValueError("sparse suffix tree needs at least one position")
    n = index.n
    order = sorted(set(positions), key=index.suffix_rank)
    lcps = [0] + [index.lcp(order[i - 1], order[i]) for i in range(1, len(order))]
    strings = [ModifiedFragment(i, n) for i in order]
    return CompactTrie(index, strings, order, presorted=True, adjacent_lcp=lcps)


@dataclass
class MatchingStatistics:
    """For each pattern position x: longest prefix of P[x..] occurring in the text."""

    lengths: list[int]
    loci: list[NodeRef]
    positions: list[int]


class SuffixTreeIndex:
    """A text with its suffix array, suffix tree and suffix links."""

    def __init__(self, text: bytes):
        self.text = text
        self.index = TextIndex(text)
        self.tree = build_suffix_tree(self.index)
        self._entry_of_pos = [0] * (len(text) + 1)
        for e, s in enumerate(self.tree.strings):
            self._entry_of_pos[s.start] = e
        self._links: dict[int, NodeRef] = {}

    @property
    def n(self) -> int:
        return len(self.text)

    def locus_of_suffix(self, pos: int, depth: int) -> NodeRef:
        """Point of T[pos..pos+depth)."""
        node = self.tree.term_node[self._entry_of_pos[pos]]
        return self.tree.weighted_ancestor(node, depth)

    def suffix_link(self, node: int) -> NodeRef:
        """Point of the path label of `node` without its first character."""
        link = self._links.get(node)
        if link is None:
            depth = self.tree.depth[node]
            if depth <= 1:
                link = NodeRef(ROOT, 0)
            else:
                start = self.tree.strings[self.tree.rep[node]].start
                link = self.locus_of_suffix(start + 1, depth - 1)
            self._links[node] = link
        return link

    def _skip(self, ref: NodeRef, pattern: bytes, pos: int, length: int) -> NodeRef:
        """Move `length` characters down from `ref`; P[pos..pos+length) is known to occur."""
        tree = self.tree
        v, d = ref.node, ref.depth
        while length > 0:
            if d == tree.depth[v]:
                v = tree.children[v][pattern[pos]]
            step = min(length, tree.depth[v] - d)
            d += step
            pos += step
            length -= step
        return NodeRef(v, d)

    def _extend(self, ref: NodeRef, pattern: bytes, pos: int) -> NodeRef:
        """Match P[pos..] character by character below `ref`."""
        tree = self.tree
        text = self.text
        v, d = ref.node, ref.depth
        while pos < len(pattern):
            if d == tree.depth[v]:
                child = tree.children[v].get(pattern[pos])
                if child is None:
                    break
                v = child
            start = tree.strings[tree.rep[v]].start
            if text[start + d] != pattern[pos]:
                break
            d += 1
            pos += 1
        return NodeRef(v, d)

    def matching_statistics(self, pattern: bytes) -> MatchingStatistics:
        """Matching statistics by suffix-link walking."""
        tree = self.tree
        m = len(pattern)
        lengths = [0] * m
        loci = [NodeRef(ROOT, 0)] * m
        positions = [0] * m
        ref = NodeRef(ROOT, 0)
        for x in range(m):
            ref = self._extend(ref, pattern, x + ref.depth)
            lengths[x] = ref.depth
            loci[x] = ref
            positions[x] = tree.strings[tree.rep[ref.node]].start
            if ref.depth == 0:
                continue
            # drop P[x]: follow the suffix link of the deepest explicit ancestor, then skip down
            v = ref.node if tree.is_explicit(ref) else tree.parent[ref.node]
            base = tree.depth[v]
            if v == ROOT:
                ref = self._skip(NodeRef(ROOT, 0), pattern, x + 1, ref.depth - 1)
            else:
                link = self.suffix_link(v)
                ref = self._skip(link, pattern, x + 1 + base - 1, ref.depth - base)
        return MatchingStatistics(lengths, loci, positions)

    def comparer(self, pattern: bytes) -> PatternComparer:
        ms = self.matching_statistics(pattern)
        return PatternComparer(self.index, pattern, ms.lengths, ms.positions)
