"""LCP of modified fragments by kangaroo jumps over exact text/text LCP queries.

A modified fragment is cut into pieces: runs of consecutive text positions and single
characters (substitutions, or pattern characters absent from the text). Two piece streams
are compared by hopping from piece boundary to piece boundary, one constant-time text LCP
per hop.
"""

from __future__ import annotations

from collections.abc import Iterator
from typing import Protocol

from kmix.core.errors import SelfCheckError
from kmix.strings import ModifiedFragment
from kmix.trie.text_lcp import TextIndex

# (text position, length, character); text runs carry character -1, single characters
# carry position -1 and length 1.
Piece = tuple[int, int, int]


class Comparer(Protocol):
    """LCP and character access for a query fragment against text fragments."""

    text: bytes

    def lcp(self, s: ModifiedFragment, q: ModifiedFragment, cap: int | None = None) -> int: ...

    def char(self, q: ModifiedFragment, offset: int) -> int: ...


def text_pieces(text: bytes, mf: ModifiedFragment) -> Iterator[Piece]:
    """Pieces of a fragment of the text itself."""
    prev = 0
    for pos, c in mf.subs:
        if pos > prev:
            yield (mf.start + prev, pos - prev, -1)
        yield (-1, 1, c)
        prev = pos + 1
    if len(mf) > prev:
        yield (mf.start + prev, len(mf) - prev, -1)


def kangaroo_lcp(
    index: TextIndex,
    s_pieces: Iterator[Piece],
    q_pieces: Iterator[Piece],
    cap: int | None = None,
) -> int:
    """Longest common prefix of two piece streams over the same text.

    Pieces are pulled lazily, so a stream is never read past the point where the
    comparison ends.
    """
    data = index.data
    total = 0
    a: Piece | None = None
    b: Piece | None = None
    while cap is None or total < cap:
        if a is None:
            a = next(s_pieces, None)
            if a is None:
                break
        if b is None:
            b = next(q_pieces, None)
            if b is None:
                break
        apos, alen, achar = a
        bpos, blen, bchar = b
        if achar >= 0 or bchar >= 0:
            ca = achar if achar >= 0 else data[apos]
            cb = bchar if bchar >= 0 else data[bpos]
            if ca != cb:
                break
            step = 1
        else:
            step = min(index.lcp(apos, bpos), alen, blen)
        total += step
        if achar < 0 and bchar < 0 and step < min(alen, blen):
            break
        a = (apos + step, alen - step, -1) if step < alen else None
        b = (bpos + step, blen - step, -1) if step < blen else None
    if cap is not None:
        return min(total, cap)
    return total


class TextComparer:
    """Compares text fragments with text fragments; used while building tries."""

    def __init__(self, index: TextIndex):
        self.index = index
        self.text = index.data

    def char(self, q: ModifiedFragment, offset: int) -> int:
        return q.char_at(self.text, offset)

    def lcp(self, s: ModifiedFragment, q: ModifiedFragment, cap: int | None = None) -> int:
        return kangaroo_lcp(
            self.index, text_pieces(self.text, s), text_pieces(self.text, q), cap
        )


def piece_limit(s: ModifiedFragment, q: ModifiedFragment) -> int:
    """Pattern pieces a comparison may pull: y + 2x + 1 inside the LCP plus the one ending it.

    x and y are the substitution counts of the text fragment and the query.
    """
    return len(q.subs) + 2 * len(s.subs) + 2


class PatternComparer:
    """Compares text fragments with fragments of a query pattern.

    Plain pattern segments are cut at matching-statistics boundaries: a piece starting at
    pattern position x is the text occurrence of P[x..x+ms[x]), or the single character
    P[x] when it does not occur in the text at all.
    """

    def __init__(self, index: TextIndex, pattern: bytes, ms_len: list[int], ms_pos: list[int]):
        self.index = index
        self.text = index.data
        self.pattern = pattern
        self.ms_len = ms_len
        self.ms_pos = ms_pos
        self.comparisons = 0
        self.max_pieces_used = 0

    def char(self, q: ModifiedFragment, offset: int) -> int:
        return q.char_at(self.pattern, offset)

    def _segment(self, a: int, b: int) -> Iterator[Piece]:
        x = a
        while x < b:
            length = self.ms_len[x]
            if length == 0:
                yield (-1, 1, self.pattern[x])
                x += 1
            else:
                length = min(length, b - x)
                yield (self.ms_pos[x], length, -1)
                x += length

    def pieces(self, q: ModifiedFragment, limit: int) -> Iterator[Piece]:
        """Pieces of `q`; requesting more than `limit` non-substitution pieces is an error."""
        used = 0
        prev = 0
        bounds = [(p.pos, p.new_char) for p in q.subs] + [(len(q), -1)]
        for pos, c in bounds:
            for piece in self._segment(q.start + prev, q.start + pos):
                used += 1
                if used > limit:
                    raise SelfCheckError(
                        f"kangaroo comparison reached the discarded suffix after {limit} pieces"
                    )
                self.max_pieces_used = max(self.max_pieces_used, used)
                yield piece
            if c >= 0:
                yield (-1, 1, c)
            prev = pos + 1

    def lcp(self, s: ModifiedFragment, q: ModifiedFragment, cap: int | None = None) -> int:
        self.comparisons += 1
        return kangaroo_lcp(
            self.index, text_pieces(self.text, s), self.pieces(q, piece_limit(s, q)), cap
        )


def compare(comparer: Comparer, s: ModifiedFragment, q: ModifiedFragment) -> tuple[int, int]:
    """Prefix order of a stored string against a query, with their LCP.

    The sign is 0 when q is a prefix of s, -1 when s sorts before every string with prefix q,
    and 1 otherwise.
    """
    lcp = comparer.lcp(s, q)
    if lcp == len(q):
        return 0, lcp
    if lcp == len(s):
        return -1, lcp
    return (-1 if s.char_at(comparer.text, lcp) < comparer.char(q, lcp) else 1), lcp


def compare_full(comparer: Comparer, s: ModifiedFragment, q: ModifiedFragment) -> int:
    """Total lexicographic order (a proper prefix sorts first)."""
    lcp = comparer.lcp(s, q)
    if lcp == len(s) and lcp == len(q):
        return 0
    if lcp == len(s):
        return -1
    if lcp == len(q):
        return 1
    return -1 if s.char_at(comparer.text, lcp) < comparer.char(q, lcp) else 1
