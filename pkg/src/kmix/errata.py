"""k-errata trees over a set of text suffixes.

Level 0 is the compact trie of the input suffixes. Every trie below level K is cut into
heavy paths; its off-path subtrees are copied into substitution trees one level down:

* type (a), per explicit node w and off-path child: the strings below the child starting at
  w, first character replaced by PSI;
* type (b), per heavy path C and node v on it: the strings branching off at v starting at
  the top of C, with the branching character overwritten by the heavy character.

Substitution trees of one node (type (a), ordered by character) or one heavy path (type
(b), ordered by depth) are grouped by a weight-balanced split tree; each split-tree node
owns one group trie holding the union of its substitution trees. A query walks heavy paths
with one kangaroo LCP per path and answers every range of substitution trees with the
canonical cover of the split tree.

The wildcard variant allows a substitution only where the pattern holds the wildcard
byte. Its type (a) trees of a node are merged into a single group trie and it has no type
(b) trees.
"""

from __future__ import annotations

import bisect
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Protocol

from kmix.core.config import settings
from kmix.core.errors import SelfCheckError
from kmix.strings import PSI, ModifiedFragment
from kmix.trie.compact import ROOT, CompactTrie, NodeRef
from kmix.trie.kangaroo import PatternComparer
from kmix.trie.suffix_tree import SuffixTreeIndex, build_sparse_suffix_tree

logger = logging.getLogger(__name__)


class SplitTree:
    """Weight-balanced split tree over an ordered list of weighted items.

    Node i covers items [lo[i], hi[i]). Every grandchild holding more than one item weighs
    at most half of its grandparent, so the chain above an item of weight w has
    O(log(W/w)) nodes.
    """

    def __init__(self, weights: list[int]):
        if not weights:
            raise ValueError("split tree needs at least one item")
        self.prefix = [0]
        for w in weights:
            self.prefix.append(self.prefix[-1] + w)
        self.lo: list[int] = []
        self.hi: list[int] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.group: list[int] = []
        self._make(0, len(weights))

    def _make(self, lo: int, hi: int) -> int:
        v = len(self.lo)
        self.lo.append(lo)
        self.hi.append(hi)
        self.left.append(-1)
        self.right.append(-1)
        self.group.append(-1)
        if hi - lo > 1:
            total = self.prefix[hi] - self.prefix[lo]
            target = self.prefix[lo] + (total + 1) // 2
            m = min(bisect.bisect_left(self.prefix, target, lo + 1, hi), hi - 1)
            left = self._make(lo, m)
            right = self._make(m, hi)
            self.left[v] = left
            self.right[v] = right
        return v

    def __len__(self) -> int:
        return len(self.lo)

    def weight(self, v: int) -> int:
        return self.prefix[self.hi[v]] - self.prefix[self.lo[v]]

    def cover(self, a: int, b: int) -> list[int]:
        """Maximal nodes whose item ranges lie inside [a, b)."""
        out: list[int] = []
        if a >= b:
            return out
        stack = [0]
        while stack:
            v = stack.pop()
            lo, hi = self.lo[v], self.hi[v]
            if hi <= a or b <= lo:
                continue
            if a <= lo and hi <= b:
                out.append(v)
                continue
            stack.append(self.right[v])
            stack.append(self.left[v])
        return out

    def chain(self, item: int) -> list[int]:
        """Nodes from the root down to the leaf of `item`."""
        out = [0]
        v = 0
        while self.left[v] != -1:
            v = self.left[v] if item < self.hi[self.left[v]] else self.right[v]
            out.append(v)
        return out


@dataclass
class NodeGroups:
    """Type (a) groups of one explicit node: off-path children ordered by character."""

    chars: list[int]
    children: list[int]
    split: SplitTree | None = None
    merged: int = -1


@dataclass
class PathGroups:
    """Type (b) groups of one heavy path: nodes with off-path children ordered by depth."""

    nodes: list[int]
    depths: list[int]
    split: SplitTree


@dataclass
class ErrataTrie:
    trie: CompactTrie
    level: int
    # string start minus label, equal for every string of the trie
    shift: int
    kind: str
    node_groups: dict[int, NodeGroups] = field(default_factory=dict)
    path_groups: dict[int, PathGroups] = field(default_factory=dict)


@dataclass(frozen=True)
class Locus:
    """A reported point: all strings below `ref` in trie `trie_id` match the pattern."""

    trie_id: int
    ref: NodeRef
    base: int


@dataclass
class ErrataResult:
    loci: list[Locus]
    labels: list[int]


class StoreHooks(Protocol):
    """Receives the substitutions a walk would take below the last built level."""

    def off_path(
        self, trie_id: int, node: int, e: int, base: int, exclude: int | None
    ) -> None: ...

    def on_path(self, trie_id: int, path_id: int, d: int, e: int, base: int) -> None: ...


# (trie id, point, pattern offset of trie depth 0, remaining budget, level)
_State = tuple[int, NodeRef, int, int, int]


class ErrataTree:
    """Levels 0..k of substitution and group tries over the suffixes at `positions`.

    Position n (the empty suffix) is allowed.
    """

    def __init__(
        self,
        host: SuffixTreeIndex,
        positions: list[int],
        k: int,
        *,
        wildcard: bool = False,
    ):
        if not positions:
            raise ValueError("errata tree needs at least one suffix")
        if k < 0:
            raise ValueError(f"k must be non-negative, got {k}")
        n = host.n
        bad = [p for p in positions if not 0 <= p <= n]
        if bad:
            raise ValueError(f"suffix positions outside [0..{n}]: {bad[:5]}")
        if len(set(positions)) != len(positions):
            raise ValueError("suffix positions must be distinct")
        self.host = host
        self.index = host.index
        self.text = host.text
        self.k = k
        self.wildcard = wildcard
        self.tries: list[ErrataTrie] = []
        self._add(build_sparse_suffix_tree(self.index, positions), 0, 0, "suffixes")
        self._build()
        if settings.checks_enabled:
            self.check()
        logger.info(
            "errata tree: k=%d wildcard=%s tries=%d terminals=%d",
            k,
            wildcard,
            len(self.tries),
            self.terminal_count(),
        )

    # -- construction ---------------------------------------------------------------------

    def _add(self, trie: CompactTrie, level: int, shift: int, kind: str) -> int:
        self.tries.append(ErrataTrie(trie, level, shift, kind))
        return len(self.tries) - 1

    def _build(self) -> None:
        tid = 0
        while tid < len(self.tries):
            et = self.tries[tid]
            if et.level < self.k:
                self._build_node_groups(et)
                if not self.wildcard:
                    self._build_path_groups(et)
            tid += 1

    def _off_path(self, trie: CompactTrie, v: int) -> list[tuple[int, int]]:
        kids = trie.children[v]
        return sorted((c, u) for c, u in kids.items() if u != trie.heavy[v])

    def _node_group_trie(self, et: ErrataTrie, w: int, children: list[int]) -> int:
        trie = et.trie
        d_w = trie.depth[w]
        strings, labels = [], []
        for u in children:
            for e in trie.entries_below(NodeRef(u, trie.depth[u])):
                strings.append(trie.strings[e].shift(d_w).set_char(self.text, 0, PSI))
                labels.append(trie.labels[e])
        group = CompactTrie(self.index, strings, labels)
        return self._add(group, et.level + 1, et.shift + d_w, "node")

    def _build_node_groups(self, et: ErrataTrie) -> None:
        trie = et.trie
        for w in range(trie.size):
            off = self._off_path(trie, w)
            if not off:
                continue
            groups = NodeGroups([c for c, _ in off], [u for _, u in off])
            if self.wildcard:
                groups.merged = self._node_group_trie(et, w, groups.children)
            else:
                split = SplitTree([trie.count[u] for u in groups.children])
                for v in range(len(split)):
                    kids = groups.children[split.lo[v] : split.hi[v]]
                    split.group[v] = self._node_group_trie(et, w, kids)
                groups.split = split
            et.node_groups[w] = groups

    def _build_path_groups(self, et: ErrataTrie) -> None:
        trie = et.trie
        for path_id, (top, nodes) in enumerate(trie.heavy_paths()):
            big_d = trie.depth[top]
            main = trie.heavy_string(top)
            items = [v for v in nodes if self._off_path(trie, v)]
            if not items:
                continue
            weights = [sum(trie.count[u] for _, u in self._off_path(trie, v)) for v in items]
            split = SplitTree(weights)
            for s in range(len(split)):
                strings, labels = [], []
                for v in items[split.lo[s] : split.hi[s]]:
                    d_v = trie.depth[v]
                    b_v = main.char_at(self.text, d_v)
                    for _, u in self._off_path(trie, v):
                        for e in trie.entries_below(NodeRef(u, trie.depth[u])):
                            s_mod = trie.strings[e].shift(big_d)
                            strings.append(s_mod.set_char(self.text, d_v - big_d, b_v))
                            labels.append(trie.labels[e])
                group = CompactTrie(self.index, strings, labels, main=main.shift(big_d))
                split.group[s] = self._add(group, et.level + 1, et.shift + big_d, "path")
            et.path_groups[path_id] = PathGroups(items, [trie.depth[v] for v in items], split)

    # -- statistics and checks ------------------------------------------------------------

    def terminal_count(self, max_level: int | None = None) -> int:
        return sum(
            len(et.trie.strings)
            for et in self.tries
            if max_level is None or et.level <= max_level
        )

    def tries_at(self, level: int) -> list[int]:
        return [tid for tid, et in enumerate(self.tries) if et.level == level]

    def label_multiplicity_stats(self) -> Counter[int]:
        """Occurrences of every label across all tries; each trie holds a label at most once."""
        counts: Counter[int] = Counter()
        for tid, et in enumerate(self.tries):
            labels = et.trie.labels
            if len(set(labels)) != len(labels):
                raise SelfCheckError(f"trie {tid} holds a label more than once")
            counts.update(labels)
        return counts

    def check(self) -> None:
        self.label_multiplicity_stats()
        for et in self.tries:
            et.trie.check()
            splits = [g.split for g in et.node_groups.values() if g.split is not None]
            splits += [g.split for g in et.path_groups.values()]
            for split in splits:
                for item in range(len(split.prefix) - 1):
                    chain = split.chain(item)
                    sizes = [split.weight(v) for v in chain]
                    for i in range(len(sizes) - 2):
                        single = split.hi[chain[i + 2]] - split.lo[chain[i + 2]] == 1
                        if not single and 2 * sizes[i + 2] > sizes[i]:
                            raise SelfCheckError(f"group chain {sizes} does not halve")

    # -- queries --------------------------------------------------------------------------

    def query(
        self,
        comparer: PatternComparer,
        start: int,
        budget: int,
        *,
        wildcard_byte: int | None = None,
        stores: StoreHooks | None = None,
    ) -> ErrataResult:
        """Suffixes within budget of pattern[start:], as loci and as labels."""
        top = self.k + (1 if stores is not None else 0)
        if not 0 <= budget <= top:
            raise ValueError(f"budget {budget} outside [0..{top}]")
        if self.wildcard != (wildcard_byte is not None):
            raise ValueError("wildcard queries need a wildcard tree and a wildcard byte")
        walker = _Walker(self, comparer, wildcard_byte, stores)
        loci = walker.run((0, NodeRef(ROOT, 0), start, budget, 0))
        labels: list[int] = []
        for locus in loci:
            labels.extend(self.tries[locus.trie_id].trie.subtree_labels(locus.ref))
        if settings.checks_enabled and len(set(labels)) != len(labels):
            raise SelfCheckError("errata query reported a suffix twice")
        return ErrataResult(loci, sorted(labels))

    def query_pattern(self, pattern: bytes, budget: int) -> ErrataResult:
        return self.query(self.host.comparer(pattern), 0, budget)


class _Walker:
    def __init__(
        self,
        tree: ErrataTree,
        comparer: PatternComparer,
        wildcard_byte: int | None,
        stores: StoreHooks | None,
    ):
        self.tree = tree
        self.comparer = comparer
        self.m = len(comparer.pattern)
        self.wildcard_byte = wildcard_byte
        self.stores = stores
        self.stack: list[_State] = []
        self.visited = 0

    def run(self, state: _State) -> list[Locus]:
        out: list[Locus] = []
        self.stack.append(state)
        while self.stack:
            self._walk(self.stack.pop(), out)
        return out

    def _spawn_node(self, tid: int, w: int, e: int, base: int, budget: int, level: int,
                    exclude: int | None) -> None:
        tree = self.tree
        et = tree.tries[tid]
        if level >= tree.k:
            if self.stores is not None:
                self.stores.off_path(tid, w, e, base, exclude)
            return
        groups = et.node_groups.get(w)
        if groups is None:
            return
        if groups.split is None:
            targets = [groups.merged]
        else:
            i = bisect.bisect_left(groups.chars, exclude) if exclude is not None else 0
            skip = exclude is not None and i < len(groups.chars) and groups.chars[i] == exclude
            ranges = [(0, i), (i + 1, len(groups.chars))] if skip else [(0, len(groups.chars))]
            targets = [groups.split.group[v] for a, b in ranges for v in groups.split.cover(a, b)]
        for gid in targets:
            g = tree.tries[gid].trie
            ref = g.weighted_ancestor(g.heavy_leaf[ROOT], 1)
            self.stack.append((gid, ref, base + e, budget, level + 1))

    def _spawn_path(self, tid: int, u: int, d: int, e: int, base: int, budget: int,
                    level: int) -> None:
        tree = self.tree
        et = tree.tries[tid]
        trie = et.trie
        path_id = trie.path_of[u]
        big_d = trie.depth[trie.paths[path_id][0]]
        # a light child is entered above its own node; the path starts at big_d
        d = max(d, big_d)
        if e <= d:
            return
        if level >= tree.k:
            if self.stores is not None:
                self.stores.on_path(tid, path_id, d, e, base)
            return
        groups = et.path_groups.get(path_id)
        if groups is None:
            return
        a = bisect.bisect_left(groups.depths, d)
        b = bisect.bisect_left(groups.depths, e)
        for v in groups.split.cover(a, b):
            gid = groups.split.group[v]
            g = tree.tries[gid].trie
            ref = g.weighted_ancestor(g.heavy_leaf[ROOT], d - big_d)
            self.stack.append((gid, ref, base + big_d, budget, level + 1))

    def _walk(self, state: _State, out: list[Locus]) -> None:
        tid, ref, base, budget, level = state
        trie = self.tree.tries[tid].trie
        comparer = self.comparer
        q = ModifiedFragment(base, self.m)
        wild = self.wildcard_byte
        u, d = ref.node, ref.depth
        while True:
            self.visited += 1
            leaf = trie.heavy_leaf[u]
            h = trie.strings[trie.terminals[leaf][0]]
            reach = min(len(h), len(q))
            e = d + comparer.lcp(h.shift(d), q.shift(d), cap=reach - d)
            if wild is None and budget:
                self._spawn_path(tid, u, d, e, base, budget - 1, level)
            if e == len(q):
                out.append(Locus(tid, trie.weighted_ancestor(leaf, e), base))
                return
            if e == len(h):
                return
            at = trie.weighted_ancestor(leaf, e)
            c = comparer.char(q, e)
            free = wild is not None and c == wild
            can_sub = free or (wild is None and budget > 0)
            cost = 0 if free else 1
            if not trie.is_explicit(at):
                if not can_sub:
                    return
                u, d, budget = at.node, e + 1, budget - cost
                continue
            w = at.node
            if can_sub:
                self._spawn_node(tid, w, e, base, budget - cost, level, None if free else c)
            light = trie.children[w].get(c)
            if light is not None and light != trie.heavy[w]:
                self.stack.append((tid, NodeRef(light, e + 1), base, budget, level))
            if not can_sub:
                return
            u, d, budget = trie.heavy[w], e + 1, budget - cost


def build_errata(
    text: bytes, k: int, positions: list[int] | None = None, *, wildcard: bool = False
) -> ErrataTree:
    """Errata tree over the suffixes of `text` at `positions` (all of them by default)."""
    if positions is None:
        positions = list(range(len(text)))
    return ErrataTree(SuffixTreeIndex(text), positions, k, wildcard=wildcard)


def errata_query(tree: ErrataTree, pattern: bytes, budget: int | None = None) -> list[int]:
    """Input suffixes with at most `budget` (default k) mismatches against a prefix of length m."""
    return tree.query_pattern(pattern, tree.k if budget is None else budget).labels
