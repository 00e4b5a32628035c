"""Tries of plain text fragments in canonical form, and unrooted TreeLCP over them.

A trie of fragments is canonical when no terminal T[a..b) has an outgoing edge along
T[b]. Queries run on the companion trie of the suffixes T[a..n) and are trimmed back to
the fragment trie with a weighted-ancestor step.
"""

from __future__ import annotations

from kmix.core.errors import SelfCheckError
from kmix.strings import ModifiedFragment
from kmix.trie.compact import ROOT, CompactTrie, NodeRef
from kmix.trie.kangaroo import Comparer


def _extension(trie: CompactTrie, entry: int) -> int:
    """End of the canonical extension of the fragment stored at `entry`."""
    frag = trie.strings[entry]
    n = len(trie.text)
    ref = NodeRef(trie.term_node[entry], len(frag))
    b = frag.end
    while b < n:
        nxt = trie.continues_with(ref, trie.text[b])
        if nxt is None:
            break
        ref = nxt
        b += 1
    return b


def is_canonical(trie: CompactTrie) -> bool:
    return all(_extension(trie, e) == trie.strings[e].end for e in range(len(trie.strings)))


def canonicalize(trie: CompactTrie) -> CompactTrie:
    """Same-shape trie where every terminal is moved down while an edge continues its text."""
    for s in trie.strings:
        if s.subs:
            raise ValueError("canonicalize needs plain fragments")
    strings = [
        ModifiedFragment(s.start, _extension(trie, e)) for e, s in enumerate(trie.strings)
    ]
    return CompactTrie(trie.index, strings, list(trie.labels))


def _max_witness(trie: CompactTrie, weight: list[int]) -> list[int]:
    """Per node, the entry of largest weight in its subtree (smallest entry on ties)."""
    best = [-1] * trie.size
    stack: list[tuple[int, bool]] = [(ROOT, False)]
    while stack:
        v, done = stack.pop()
        if not done:
            stack.append((v, True))
            stack.extend((c, False) for c in trie.children[v].values())
            continue
        candidates = list(trie.terminals[v]) + [best[c] for c in trie.children[v].values()]
        best[v] = max(candidates, key=lambda e: (weight[e], -e))
    return best


class CanonicalFragmentIndex:
    """Unrooted TreeLCP on a canonical trie of fragments via its suffix-extended companion."""

    def __init__(self, trie: CompactTrie, original_lengths: list[int] | None = None):
        if not is_canonical(trie):
            raise ValueError("fragment trie is not in canonical form")
        self.trie = trie
        n = len(trie.text)
        entries = range(len(trie.strings))
        self.extended = CompactTrie(
            trie.index,
            [ModifiedFragment(trie.strings[e].start, n) for e in entries],
            list(entries),
        )
        lengths = [len(s) for s in trie.strings]
        self._witness = _max_witness(self.extended, lengths)
        self.original_lengths = original_lengths or lengths
        # per fragment-trie node: entry reaching deepest in the original (pre-canonical) trie
        self.witness = _max_witness(trie, self.original_lengths)

    def query(self, comparer: Comparer, start: NodeRef, q: ModifiedFragment) -> NodeRef:
        """Deepest point below `start` in the fragment trie continuing with a prefix of q."""
        trie = self.trie
        d = start.depth
        e0 = trie.rep[start.node]
        ext = self.extended
        ext_start = ext.weighted_ancestor(ext.term_node[e0], d)
        x = ext.tree_lcp_unrooted(comparer, ext_start, q)
        w = self._witness[x.node]
        depth = min(x.depth, len(trie.strings[w]))
        if depth < d:
            raise SelfCheckError("canonical fragment query left the start subtree")
        return trie.weighted_ancestor(trie.term_node[w], depth)
