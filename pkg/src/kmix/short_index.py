"""k-mismatch index for short patterns (m <= mu).

Every suffix is stored in up to h modified copies whose substitutions sit in its first
mu positions. A query lists the copies that have the pattern as a prefix (occurrences with
at most h mismatches), then modifies the pattern itself in up to k - h positions after the
last substitution of the stored copy.

Copies are grouped by (kappa, t): kappa substitutions with the rightmost one in the base
interval [t - f(t), t), where f(t) is the largest power of two dividing t. Only a sampled
trie per group is kept; the sorted copies are read back through a RetrievalStore that
stores, per copy, the rightmost substitution as a triad plus an increasing pointer into
the sorted list of copies with one substitution less.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from collections.abc import Iterator
from functools import cmp_to_key, partial
from math import comb

from kmix.core.config import settings
from kmix.core.errors import SelfCheckError
from kmix.strings import PSI, ModifiedFragment, Substitution
from kmix.succinct import IncreasingSeq
from kmix.trie.compact import CompactTrie
from kmix.trie.kangaroo import PatternComparer, TextComparer, compare_full
from kmix.trie.sampled import SampledTrie
from kmix.trie.suffix_tree import SuffixTreeIndex

logger = logging.getLogger(__name__)

# (position of the rightmost substitution, original byte, new byte); p = -1 for plain suffixes
Triad = tuple[int, int, int]
PLAIN = (-1, -1, -1)


def f_pow2(t: int) -> int:
    """Largest power of two dividing t."""
    if t < 1:
        raise ValueError(f"f is defined for positive integers, got {t}")
    return t & -t


def f_sequence(j: int) -> list[int]:
    """j, j - f(j), ... down to (excluding) 0; the base intervals tile [0..j)."""
    if j < 1:
        raise ValueError(f"f-sequence needs j >= 1, got {j}")
    out = []
    while j:
        out.append(j)
        j -= f_pow2(j)
    return out


def substitution_alphabet(text: bytes) -> list[int]:
    """Bytes a stored copy may be modified to; PSI stands for every byte absent from the text."""
    alphabet = sorted(set(text))
    if len(alphabet) < 256:
        alphabet.append(PSI)
    return alphabet


def predicted_terminals(n: int, mu: int, h: int, sub_alphabet: int) -> int:
    total = 0
    for kappa in range(h + 1):
        per_choice = (sub_alphabet - 1) ** kappa
        total += sum(comb(min(mu, n - i), kappa) for i in range(n)) * per_choice
    return total


def modified_suffixes(
    text: bytes, kappa: int, mu: int, alphabet: list[int]
) -> Iterator[tuple[int, ModifiedFragment]]:
    """(rightmost substitution offset, copy) for every kappa-modified suffix."""
    n = len(text)
    for i in range(n):
        if kappa == 0:
            yield 0, ModifiedFragment(i, n)
            continue
        for positions in itertools.combinations(range(min(mu, n - i)), kappa):
            choices = [[c for c in alphabet if c != text[i + p]] for p in positions]
            for chars in itertools.product(*choices):
                subs = tuple(Substitution(p, c) for p, c in zip(positions, chars, strict=True))
                yield positions[-1], ModifiedFragment(i, n, subs)


def sort_copies(comparer: TextComparer, copies: list[ModifiedFragment]) -> list[ModifiedFragment]:
    """Lexicographic order; equal strings by start position."""

    def order(a: ModifiedFragment, b: ModifiedFragment) -> int:
        c = compare_full(comparer, a, b)
        return c if c else (a.start > b.start) - (a.start < b.start)

    return sorted(copies, key=cmp_to_key(order))


class RetrievalStore:
    """The i-th copy of any group from triads and increasing Cut pointers into L."""

    def __init__(
        self,
        comparer: TextComparer,
        lighter: list[ModifiedFragment],
        groups: dict[tuple[int, int], list[ModifiedFragment]],
    ):
        self.text = comparer.text
        self.lighter = sort_copies(comparer, lighter)
        where = {mf: i for i, mf in enumerate(self.lighter)}
        self.sizes: dict[tuple[int, int], int] = {}
        self.triads: dict[tuple[int, int], list[Triad]] = {}
        self.my_triad: dict[tuple[int, int, Triad], IncreasingSeq] = {}
        self.cut: dict[tuple[int, int, Triad], IncreasingSeq] = {}
        for key, copies in groups.items():
            triads: list[Triad] = []
            members: dict[Triad, list[int]] = {}
            pointers: dict[Triad, list[int]] = {}
            for i, mf in enumerate(copies):
                if mf.subs:
                    p, c_new = mf.subs[-1]
                    triad = (p, self.text[mf.start + p], c_new)
                    parent = ModifiedFragment(mf.start, mf.end, mf.subs[:-1])
                else:
                    triad = PLAIN
                    parent = mf
                triads.append(triad)
                members.setdefault(triad, []).append(i + 1)
                pointers.setdefault(triad, []).append(where[parent] + 1)
            self.sizes[key] = len(copies)
            self.triads[key] = triads
            for triad, seq in members.items():
                self.my_triad[(*key, triad)] = IncreasingSeq(seq, len(copies))
                self.cut[(*key, triad)] = IncreasingSeq(pointers[triad], len(self.lighter))

    def retrieve(self, kappa: int, t: int, i: int) -> ModifiedFragment:
        """The i-th (0-based) copy of group (kappa, t) in lexicographic order."""
        triad = self.triads[(kappa, t)][i]
        a = self.my_triad[(kappa, t, triad)].rank(i + 1)
        parent = self.lighter[self.cut[(kappa, t, triad)].select(a) - 1]
        if triad == PLAIN:
            return parent
        return parent.set_char(self.text, triad[0], triad[2])

    def bits(self) -> int:
        triad_bits = 3 * 16 * sum(len(t) for t in self.triads.values())
        seq_bits = sum(s.bits() for s in self.my_triad.values())
        seq_bits += sum(s.bits() for s in self.cut.values())
        return triad_bits + seq_bits


class ShortIndex:
    """Index answering k-mismatch queries for patterns of length 1..mu."""

    def __init__(
        self,
        text: bytes,
        mu: int,
        h: int,
        k: int,
        *,
        keep_basic: bool = False,
        host: SuffixTreeIndex | None = None,
    ):
        n = len(text)
        if not 1 <= h < k:
            raise ValueError(f"short index needs 1 <= h < k, got h={h} k={k}")
        if not 1 <= mu <= n:
            raise ValueError(f"mu must lie in [1..{n}], got {mu}")
        self.text = text
        self.mu, self.h, self.k = mu, h, k
        self.alphabet = sorted(set(text))
        self.sub_alphabet = substitution_alphabet(text)
        predicted = predicted_terminals(n, mu, h, len(self.sub_alphabet))
        if predicted > settings.TERMINAL_BUDGET:
            logger.warning("short index of %d copies rejected", predicted)
            raise ValueError(
                f"short index would hold {predicted} copies, "
                f"above TERMINAL_BUDGET={settings.TERMINAL_BUDGET}"
            )
        self.host = host or SuffixTreeIndex(text)
        index = self.host.index
        builder = TextComparer(index)

        basic: dict[tuple[int, int], list[ModifiedFragment]] = {}
        lighter: list[ModifiedFragment] = []
        for kappa in range(h + 1):
            for j, mf in modified_suffixes(text, kappa, mu, self.sub_alphabet):
                basic.setdefault((kappa, j), []).append(mf)
                if kappa < h:
                    lighter.append(mf)

        groups: dict[tuple[int, int], list[ModifiedFragment]] = {
            (0, 1): [ModifiedFragment(i, n) for i in index.sa.tolist()]
        }
        for kappa in range(1, h + 1):
            for t in range(1, mu + 1):
                copies = [
                    mf for j in range(t - f_pow2(t), t) for mf in basic.get((kappa, j), [])
                ]
                if copies:
                    groups[(kappa, t)] = sort_copies(builder, copies)

        self.store = RetrievalStore(builder, lighter, groups)
        self.sampled = {
            key: SampledTrie(
                index, len(copies), partial(self.store.retrieve, *key), decomposed=True
            )
            for key, copies in groups.items()
        }
        self.basic: dict[tuple[int, int], CompactTrie] = {}
        self.grouped: dict[tuple[int, int], list[ModifiedFragment]] = {}
        if keep_basic:
            self.basic = {
                key: CompactTrie(index, copies, [mf.start for mf in copies])
                for key, copies in basic.items()
            }
            self.grouped = groups
        self.last_multiplicity: Counter[int] = Counter()
        logger.info(
            "short index: n=%d mu=%d h=%d k=%d groups=%d copies=%d",
            n,
            mu,
            h,
            k,
            len(groups),
            sum(len(c) for c in groups.values()),
        )

    # -- patterns -------------------------------------------------------------------------

    def _prepare(self, pattern: bytes) -> tuple[PatternComparer, ModifiedFragment]:
        m = len(pattern)
        if not 1 <= m <= self.mu:
            raise ValueError(f"short index answers patterns of length 1..{self.mu}, got {m}")
        known = set(self.alphabet)
        subs = tuple(Substitution(x, PSI) for x, c in enumerate(pattern) if c not in known)
        return self.host.comparer(pattern), ModifiedFragment(0, m, subs)

    def _variants(
        self, pattern: bytes, q: ModifiedFragment
    ) -> Iterator[tuple[int, ModifiedFragment]]:
        """(first modified offset, pattern) for 1..k-h modifications toward text bytes."""
        m = len(q)
        for count in range(1, self.k - self.h + 1):
            for positions in itertools.combinations(range(m), count):
                if positions[0] == 0:
                    continue
                choices = [
                    [c for c in self.alphabet if c != q.char_at(pattern, x)] for x in positions
                ]
                for chars in itertools.product(*choices):
                    variant = q
                    for x, c in zip(positions, chars, strict=True):
                        variant = variant.set_char(pattern, x, c)
                    yield positions[0], variant

    def _finish(self, hits: list[int]) -> list[int]:
        self.last_multiplicity = Counter(hits)
        if settings.checks_enabled and any(c > 1 for c in self.last_multiplicity.values()):
            raise SelfCheckError("short index reported an occurrence more than once")
        return sorted(hits)

    # -- queries --------------------------------------------------------------------------

    def terminal_range(
        self, key: tuple[int, int], comparer: PatternComparer, q: ModifiedFragment
    ) -> tuple[int, int]:
        sampled = self.sampled.get(key)
        if sampled is None:
            return 0, 0
        return sampled.terminal_range(comparer, q)

    def _report(self, key: tuple[int, int], comparer: PatternComparer,
                q: ModifiedFragment, hits: list[int]) -> None:
        lo, hi = self.terminal_range(key, comparer, q)
        hits.extend(self.store.retrieve(*key, i).start for i in range(lo, hi))

    def query(self, pattern: bytes) -> list[int]:
        """Start positions of k-mismatch occurrences, through the grouped tries."""
        comparer, q = self._prepare(pattern)
        m = len(q)
        hits: list[int] = []
        self._report((0, 1), comparer, q, hits)
        for kappa in range(1, self.h + 1):
            for t in f_sequence(m):
                self._report((kappa, t), comparer, q, hits)
        for j, variant in self._variants(pattern, q):
            for t in f_sequence(j):
                self._report((self.h, t), comparer, variant, hits)
        logger.debug("short query m=%d: %d hits, %d comparisons", m, len(hits),
                     comparer.comparisons)
        return self._finish(hits)

    def _probe_basic(self, key: tuple[int, int], comparer: PatternComparer,
                     q: ModifiedFragment, hits: list[int]) -> None:
        trie = self.basic.get(key)
        if trie is None:
            return
        x = trie.tree_lcp_rooted(comparer, q)
        if x.depth == len(q):
            hits.extend(trie.subtree_labels(x))

    def query_basic(self, pattern: bytes) -> list[int]:
        """Same answer as `query`, probing every basic trie separately."""
        if not self.basic:
            raise ValueError("basic tries were not kept; build with keep_basic=True")
        comparer, q = self._prepare(pattern)
        m = len(q)
        hits: list[int] = []
        self._probe_basic((0, 0), comparer, q, hits)
        for kappa in range(1, self.h + 1):
            for j in range(kappa - 1, m):
                self._probe_basic((kappa, j), comparer, q, hits)
        for j, variant in self._variants(pattern, q):
            for i in range(self.h - 1, j):
                self._probe_basic((self.h, i), comparer, variant, hits)
        return self._finish(hits)

    def stats(self) -> dict[str, int]:
        return {
            "groups": len(self.store.sizes),
            "copies": sum(self.store.sizes.values()),
            "lighter_copies": len(self.store.lighter),
            "sampled_terminals": sum(len(s.samples) for s in self.sampled.values()),
            "store_bits": self.store.bits(),
        }


def build_short_index(text: bytes, mu: int, h: int, k: int, **kwargs) -> ShortIndex:
    return ShortIndex(text, mu, h, k, **kwargs)


def query_short(index: ShortIndex, pattern: bytes) -> list[int]:
    return index.query(pattern)


def query_short_basic(index: ShortIndex, pattern: bytes) -> list[int]:
    return index.query_basic(pattern)
