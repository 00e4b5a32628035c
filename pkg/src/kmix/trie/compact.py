"""Compact tries over (modified) text fragments.

Every stored string is a ModifiedFragment over the indexed text; edges are never
materialized. A node's edge label is recovered from its representative string and the
string depths of the node and its parent.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cmp_to_key

from kmix.core.errors import SelfCheckError
from kmix.strings import ModifiedFragment
from kmix.trie.kangaroo import Comparer, TextComparer, compare, compare_full
from kmix.trie.text_lcp import TextIndex

logger = logging.getLogger(__name__)

ROOT = 0


@dataclass(frozen=True)
class NodeRef:
    """A point of a trie: string depth plus the nearest explicit node at or below it.

    The point is explicit iff `depth` equals the string depth of `node`.
    """

    node: int
    depth: int


class CompactTrie:
    """Compact trie of a list of text fragments with per-entry labels.

    Equal strings share one terminal node carrying all their labels. `order` lists the
    entries lexicographically; the subtree of a node covers order[lo:hi].
    """

    def __init__(
        self,
        index: TextIndex,
        strings: list[ModifiedFragment],
        labels: list[int],
        *,
        main: ModifiedFragment | None = None,
        presorted: bool = False,
        adjacent_lcp: list[int] | None = None,
    ):
        if len(strings) != len(labels):
            raise ValueError("strings and labels must have equal length")
        self.index = index
        self.text = index.data
        self.strings = strings
        self.labels = labels
        self.descend_steps = 0
        self.unrooted_probes = 0
        self._builder = TextComparer(index)

        if presorted:
            self.order = list(range(len(strings)))
        else:
            key = cmp_to_key(lambda a, b: compare_full(self._builder, strings[a], strings[b]))
            self.order = sorted(range(len(strings)), key=key)
        if adjacent_lcp is None:
            adjacent_lcp = [0] + [
                self._builder.lcp(strings[self.order[i - 1]], strings[self.order[i]])
                for i in range(1, len(self.order))
            ]

        self.parent: list[int] = []
        self.depth: list[int] = []
        self.rep: list[int] = []
        self.children: list[dict[int, int]] = []
        self.terminals: list[list[int]] = []
        self.term_node: list[int] = [ROOT] * len(strings)
        self._build(adjacent_lcp)
        self._intervals()
        self._heavy(main)
        self._up: list[list[int]] | None = None

    # -- construction -------------------------------------------------------------------

    def _new_node(self, parent: int, depth: int, rep: int) -> int:
        self.parent.append(parent)
        self.depth.append(depth)
        self.rep.append(rep)
        self.children.append({})
        self.terminals.append([])
        return len(self.depth) - 1

    def _char(self, entry: int, offset: int) -> int:
        return self.strings[entry].char_at(self.text, offset)

    def _build(self, adjacent_lcp: list[int]) -> None:
        first = self.order[0] if self.order else -1
        self._new_node(ROOT, 0, first)
        stack = [ROOT]
        for i, e in enumerate(self.order):
            length = len(self.strings[e])
            lcp = adjacent_lcp[i] if i else 0
            last = -1
            while self.depth[stack[-1]] > lcp:
                last = stack.pop()
            top = stack[-1]
            if self.depth[top] < lcp:
                mid = self._new_node(top, lcp, self.rep[last])
                self.children[top][self._char(self.rep[last], self.depth[top])] = mid
                self.children[mid][self._char(self.rep[last], lcp)] = last
                self.parent[last] = mid
                stack.append(mid)
                top = mid
            if length == lcp:
                self.terminals[top].append(e)
                self.term_node[e] = top
            else:
                leaf = self._new_node(top, length, e)
                self.children[top][self._char(e, lcp)] = leaf
                self.terminals[leaf].append(e)
                self.term_node[e] = leaf
                stack.append(leaf)

    def _intervals(self) -> None:
        size = len(self.depth)
        self.lo = [0] * size
        self.hi = [0] * size
        counter = 0
        stack: list[tuple[int, bool]] = [(ROOT, False)]
        while stack:
            v, done = stack.pop()
            if done:
                self.hi[v] = counter
                continue
            self.lo[v] = counter
            counter += len(self.terminals[v])
            stack.append((v, True))
            for c in sorted(self.children[v], reverse=True):
                stack.append((self.children[v][c], False))
        self.count = [h - lo for lo, h in zip(self.lo, self.hi, strict=True)]

    def _heavy(self, main: ModifiedFragment | None) -> None:
        size = len(self.depth)
        self.heavy = [-1] * size
        for v in range(size):
            kids = self.children[v]
            if kids:
                c = min(kids, key=lambda ch: (-self.count[kids[ch]], ch))
                self.heavy[v] = kids[c]
        if main is not None:
            self._force_main_path(main)
        self.path_of = [-1] * size
        self.paths: list[list[int]] = []
        self.heavy_leaf = [-1] * size
        stack = [ROOT]
        while stack:
            top = stack.pop()
            path_id = len(self.paths)
            nodes = []
            v = top
            while v != -1:
                nodes.append(v)
                self.path_of[v] = path_id
                for child in self.children[v].values():
                    if child != self.heavy[v]:
                        stack.append(child)
                v = self.heavy[v]
            self.paths.append(nodes)
            for v in nodes:
                self.heavy_leaf[v] = nodes[-1]

    def _force_main_path(self, main: ModifiedFragment) -> None:
        v, d = ROOT, 0
        while d < len(main):
            child = self.children[v].get(main.char_at(self.text, d))
            if child is None:
                return
            self.heavy[v] = child
            lcp = self._builder.lcp(self.strings[self.rep[child]].shift(d), main.shift(d))
            if d + lcp < self.depth[child]:
                return
            v, d = child, self.depth[child]

    # -- basic accessors ----------------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.depth)

    @property
    def root(self) -> NodeRef:
        return NodeRef(ROOT, 0)

    def entries_below(self, ref: NodeRef) -> list[int]:
        return self.order[self.lo[ref.node] : self.hi[ref.node]]

    def subtree_labels(self, ref: NodeRef) -> list[int]:
        return [self.labels[e] for e in self.entries_below(ref)]

    def is_explicit(self, ref: NodeRef) -> bool:
        return ref.depth == self.depth[ref.node]

    def point_string(self, ref: NodeRef) -> ModifiedFragment:
        """The path label of a point, as a prefix of its representative string."""
        return self.strings[self.rep[ref.node]].truncate(ref.depth)

    def continues_with(self, ref: NodeRef, c: int) -> NodeRef | None:
        """The point one character below `ref` along `c`, if any."""
        if ref.depth < self.depth[ref.node]:
            if self._char(self.rep[ref.node], ref.depth) != c:
                return None
            return NodeRef(ref.node, ref.depth + 1)
        child = self.children[ref.node].get(c)
        if child is None:
            return None
        return NodeRef(child, ref.depth + 1)

    def heavy_paths(self) -> list[tuple[int, list[int]]]:
        """(top, nodes by depth) for every heavy path; list index is the path id."""
        return [(nodes[0], nodes) for nodes in self.paths]

    def heavy_string(self, node: int) -> ModifiedFragment:
        """A string of the heavy-path leaf below `node`."""
        return self.strings[self.terminals[self.heavy_leaf[node]][0]]

    # -- weighted ancestors ---------------------------------------------------------------

    def _lifting(self) -> list[list[int]]:
        if self._up is None:
            up = [[p if v != ROOT else ROOT for v, p in enumerate(self.parent)]]
            while (1 << len(up)) < max(2, self.size):
                prev = up[-1]
                up.append([prev[prev[v]] for v in range(self.size)])
            self._up = up
        return self._up

    def weighted_ancestor(self, node: int, depth: int) -> NodeRef:
        """Ancestor point of `node` at string depth `depth`."""
        if depth < 0 or depth > self.depth[node]:
            raise ValueError(f"depth {depth} outside [0..{self.depth[node]}]")
        up = self._lifting()
        v = node
        for level in reversed(up):
            a = level[v]
            if self.depth[a] >= depth:
                v = a
        return NodeRef(v, depth)

    # -- TreeLCP -------------------------------------------------------------------------

    def descend(self, comparer: Comparer, start: NodeRef, q: ModifiedFragment) -> NodeRef:
        """Deepest point below `start` whose path continues with a prefix of `q`."""
        v, d = start.node, start.depth
        matched = 0
        while matched < len(q):
            if d == self.depth[v]:
                child = self.children[v].get(comparer.char(q, matched))
                if child is None:
                    return NodeRef(v, d)
                v = child
            self.descend_steps += 1
            edge = self.depth[v] - d
            s = self.strings[self.rep[v]].shift(d)
            step = comparer.lcp(s, q.shift(matched), cap=edge)
            d += step
            matched += step
            if step < edge:
                return NodeRef(v, d)
        return NodeRef(v, d)

    def tree_lcp_rooted(self, comparer: Comparer, q: ModifiedFragment) -> NodeRef:
        return self.descend(comparer, self.root, q)

    def tree_lcp_unrooted(self, comparer: Comparer, start: NodeRef, q: ModifiedFragment) -> NodeRef:
        """Same result as `descend`, found by binary search over the subtree's entries."""
        lo, hi = self.lo[start.node], self.hi[start.node]
        if lo == hi or not len(q):
            return start
        d = start.depth
        left, right = lo, hi
        while left < right:
            mid = (left + right) // 2
            self.unrooted_probes += 1
            sign, _ = compare(comparer, self.strings[self.order[mid]].shift(d), q)
            if sign < 0:
                left = mid + 1
            else:
                right = mid
        best, best_entry = -1, -1
        for pos in (left - 1, left):
            if lo <= pos < hi:
                e = self.order[pos]
                lcp = comparer.lcp(self.strings[e].shift(d), q)
                if lcp > best:
                    best, best_entry = lcp, e
        return self.weighted_ancestor(self.term_node[best_entry], d + best)

    # -- checks ---------------------------------------------------------------------------

    def check(self) -> None:
        """Structural invariants; raises SelfCheckError."""
        for v in range(self.size):
            kids = self.children[v]
            if v != ROOT and not self.terminals[v] and len(kids) < 2:
                raise SelfCheckError(f"node {v} is unary and non-terminal")
            total = len(self.terminals[v]) + sum(self.count[c] for c in kids.values())
            if total != self.count[v]:
                raise SelfCheckError(f"node {v} count {self.count[v]} != {total}")
            if kids and self.count[self.heavy[v]] < max(self.count[c] for c in kids.values()):
                if not self._on_forced_path(v):
                    raise SelfCheckError(f"node {v} heavy child is not maximal")

    def _on_forced_path(self, v: int) -> bool:
        # forced main-path choices are the only non-maximal heavy children
        return self.path_of[v] == self.path_of[ROOT]
