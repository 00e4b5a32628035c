"""TreeLCP on compact tries of (<=k)-modified suffixes by edge decomposition.

The host trie is cut into phases. An odd phase starting at a point X holds, for every
string through X, its plain prefix up to the next substitution; these fragments form a
canonical fragment trie. Wherever the host continues with a character the odd phase does
not cover, an even step of string depth one leads to the next odd phase. A query walks the
pieces of the pattern through this decomposition, one canonical-fragment query per plain
pattern segment.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

from kmix.core.config import settings
from kmix.core.errors import SelfCheckError
from kmix.strings import ModifiedFragment
from kmix.trie.canonical import CanonicalFragmentIndex, canonicalize
from kmix.trie.compact import ROOT, CompactTrie, NodeRef
from kmix.trie.kangaroo import Comparer, TextComparer

logger = logging.getLogger(__name__)


@dataclass
class OddPhase:
    origin: NodeRef
    fragments: CanonicalFragmentIndex
    even: dict[tuple[int, int], dict[int, int]] = field(default_factory=dict)

    @property
    def trie(self) -> CompactTrie:
        return self.fragments.trie


class ModifiedTrieLcp:
    """Decomposition of a host trie into canonical fragment tries and depth-one steps."""

    def __init__(self, host: CompactTrie):
        self.host = host
        self.phases: list[OddPhase] = []
        # host point -> character -> index of the odd phase entered through it
        self.even: dict[tuple[int, int], dict[int, int]] = {}
        self._build()
        logger.debug("decomposed trie of %d entries into %d odd phases",
                     len(host.strings), len(self.phases))

    def _build(self) -> None:
        host = self.host
        builder = TextComparer(host.index)
        seen = {(ROOT, 0): 0}
        queue: deque[NodeRef] = deque([host.root])
        while queue:
            origin = queue.popleft()
            depth = origin.depth
            entries = host.entries_below(origin)
            frags = []
            for e in entries:
                s = host.strings[e]
                nxt = next((p.pos for p in s.subs if p.pos >= depth), len(s))
                frags.append(ModifiedFragment(s.start + depth, s.start + nxt))
            raw = CompactTrie(host.index, frags, list(entries))
            canonical = canonicalize(raw)
            phase = OddPhase(origin, CanonicalFragmentIndex(canonical, [len(f) for f in frags]))
            self.phases.append(phase)
            for e in entries:
                s = host.strings[e]
                covered = canonical.tree_lcp_rooted(builder, s.shift(depth)).depth
                if depth + covered >= len(s):
                    continue
                y = host.weighted_ancestor(host.term_node[e], depth + covered)
                x = host.weighted_ancestor(host.term_node[e], depth + covered + 1)
                key = (x.node, x.depth)
                if key not in seen:
                    seen[key] = len(seen)
                    queue.append(x)
                c = s.char_at(host.text, depth + covered)
                self.even.setdefault((y.node, y.depth), {})[c] = seen[key]

    def _host_point(self, phase_id: int, ref: NodeRef) -> NodeRef:
        phase = self.phases[phase_id]
        frag_entry = phase.fragments.witness[ref.node]
        host_entry = phase.trie.labels[frag_entry]
        return self.host.weighted_ancestor(
            self.host.term_node[host_entry], phase.origin.depth + ref.depth
        )

    def _even_step(self, phase_id: int, ref: NodeRef, c: int) -> int | None:
        y = self._host_point(phase_id, ref)
        return self.even.get((y.node, y.depth), {}).get(c)

    def _walk(
        self, comparer: Comparer, state: tuple[int, NodeRef], q: ModifiedFragment
    ) -> tuple[tuple[int, NodeRef], bool]:
        """Advance through q; returns the final state and whether all of q was consumed."""
        phase_id, ref = state
        bounds = [(p.pos, p.new_char) for p in q.subs] + [(len(q), -1)]
        prev = 0
        for pos, c in bounds:
            segment = q.truncate(pos).shift(prev)
            while len(segment):
                phase = self.phases[phase_id]
                found = phase.fragments.query(comparer, ref, segment)
                step = found.depth - ref.depth
                if step == len(segment):
                    ref = found
                    break
                nxt = self._even_step(phase_id, found, comparer.char(segment, step))
                if nxt is None:
                    return (phase_id, found), False
                phase_id, ref = nxt, NodeRef(ROOT, 0)
                segment = segment.shift(step + 1)
            if c >= 0:
                moved = self.phases[phase_id].trie.continues_with(ref, c)
                if moved is not None:
                    ref = moved
                else:
                    nxt = self._even_step(phase_id, ref, c)
                    if nxt is None:
                        return (phase_id, ref), False
                    phase_id, ref = nxt, NodeRef(ROOT, 0)
            prev = pos + 1
        return (phase_id, ref), True

    def locate(self, start: NodeRef) -> tuple[int, NodeRef]:
        """Decomposition state of a host point."""
        state, complete = self._walk(
            TextComparer(self.host.index), (0, NodeRef(ROOT, 0)), self.host.point_string(start)
        )
        if not complete:
            raise SelfCheckError(f"host point {start} is not reachable in the decomposition")
        return state

    def query(
        self, comparer: Comparer, q: ModifiedFragment, start: NodeRef | None = None
    ) -> NodeRef:
        """TreeLCP of q in the host subtree of `start` (the root by default)."""
        state = (0, NodeRef(ROOT, 0)) if start is None else self.locate(start)
        (phase_id, ref), _ = self._walk(comparer, state, q)
        result = self._host_point(phase_id, ref)
        if settings.checks_enabled:
            expected = self.host.descend(comparer, start or self.host.root, q)
            if expected != result:
                raise SelfCheckError(f"decomposed TreeLCP {result} != direct descent {expected}")
        return result
