"""String primitives: Hamming distance, periods, runs, Lyndon roots, misperiods.

Also defines ModifiedFragment, the representation shared by every index for
(<=k)-modified suffixes and for fragments of a query pattern.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import NamedTuple

from kmix.core.config import settings
from kmix.trie.text_lcp import TextIndex

# Out-of-band character written by substitution trees. It never occurs in a text or pattern.
PSI = 256


@dataclass(frozen=True)
class Text:
    """Immutable byte text that an index is built over."""

    data: bytes
    alphabet: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        if len(self.data) < 1:
            raise ValueError("text must contain at least one byte")
        if len(self.data) > settings.MAX_TEXT_LEN:
            raise ValueError(
                f"text of length {len(self.data)} exceeds MAX_TEXT_LEN={settings.MAX_TEXT_LEN}"
            )
        object.__setattr__(self, "alphabet", tuple(sorted(set(self.data))))

    @property
    def n(self) -> int:
        return len(self.data)

    @property
    def alphabet_size(self) -> int:
        return len(self.alphabet)


class Substitution(NamedTuple):
    pos: int
    new_char: int


@dataclass(frozen=True)
class ModifiedFragment:
    """Fragment host[start:end) with substitutions at offsets relative to start.

    The host is not stored; every method that reads characters takes it as an argument,
    so the same type describes text fragments and pattern fragments.
    """

    start: int
    end: int
    subs: tuple[Substitution, ...] = ()

    def __len__(self) -> int:
        return self.end - self.start

    @property
    def sub_offsets(self) -> list[int]:
        return [s.pos for s in self.subs]

    def char_at(self, host: bytes, offset: int) -> int:
        """Character at `offset`, PSI included."""
        if offset < 0 or offset >= self.end - self.start:
            raise IndexError(f"offset {offset} outside fragment of length {len(self)}")
        if self.subs:
            i = bisect.bisect_left(self.subs, (offset, -1))
            if i < len(self.subs) and self.subs[i].pos == offset:
                return self.subs[i].new_char
        return host[self.start + offset]

    def materialize(self, host: bytes) -> list[int]:
        """Characters of the fragment as a list of ints (PSI may appear)."""
        out = list(host[self.start : self.end])
        for pos, c in self.subs:
            out[pos] = c
        return out

    def materialize_bytes(self, host: bytes) -> bytes:
        return bytes(self.materialize(host))

    def shift(self, delta: int) -> ModifiedFragment:
        """Drop the first `delta` characters."""
        if delta < 0 or delta > len(self):
            raise IndexError(f"cannot drop {delta} characters from length {len(self)}")
        subs = tuple(Substitution(p - delta, c) for p, c in self.subs if p >= delta)
        return ModifiedFragment(self.start + delta, self.end, subs)

    def truncate(self, length: int) -> ModifiedFragment:
        """Keep the first `length` characters."""
        length = min(length, len(self))
        subs = tuple(s for s in self.subs if s.pos < length)
        return ModifiedFragment(self.start, self.start + length, subs)

    def set_char(self, host: bytes, offset: int, c: int) -> ModifiedFragment:
        """Fragment with the character at `offset` replaced by `c`.

        Writing back the original byte removes the substitution.
        """
        if offset < 0 or offset >= len(self):
            raise IndexError(f"offset {offset} outside fragment of length {len(self)}")
        subs = [s for s in self.subs if s.pos != offset]
        if host[self.start + offset] != c:
            subs.append(Substitution(offset, c))
            subs.sort()
        return ModifiedFragment(self.start, self.end, tuple(subs))

    def validate(self, host: bytes, limit: int | None = None) -> None:
        if not 0 <= self.start <= self.end <= len(host):
            raise ValueError(
                f"fragment [{self.start},{self.end}) outside host of length {len(host)}"
            )
        if limit is not None and len(self.subs) > limit:
            raise ValueError(f"{len(self.subs)} substitutions exceed the limit {limit}")
        prev = -1
        for pos, c in self.subs:
            if pos <= prev:
                raise ValueError("substitutions must be strictly increasing by offset")
            if pos >= len(self):
                raise ValueError(f"substitution offset {pos} outside fragment")
            if host[self.start + pos] == c:
                raise ValueError(f"substitution at offset {pos} writes the original byte")
            prev = pos


class Run(NamedTuple):
    """Maximal periodic fragment T[start..end] (inclusive) with smallest period `period`."""

    start: int
    end: int
    period: int
    lyndon_offset: int

    @property
    def length(self) -> int:
        return self.end - self.start + 1


def hamming(u: bytes, v: bytes) -> int:
    if len(u) != len(v):
        raise ValueError(f"hamming distance needs equal lengths, got {len(u)} and {len(v)}")
    return sum(1 for a, b in zip(u, v, strict=True) if a != b)


def failure_function(u: bytes) -> list[int]:
    """Border lengths: fail[i] is the longest proper border of u[:i+1]."""
    fail = [0] * len(u)
    k = 0
    for i in range(1, len(u)):
        while k and u[i] != u[k]:
            k = fail[k - 1]
        if u[i] == u[k]:
            k += 1
        fail[i] = k
    return fail


def smallest_period(u: bytes) -> int:
    if not u:
        raise ValueError("smallest_period of an empty string")
    return len(u) - failure_function(u)[-1]


def is_primitive(u: bytes) -> bool:
    p = smallest_period(u)
    return p == len(u) or len(u) % p != 0


def minimal_rotation(u: bytes) -> int:
    """Start of the lexicographically least rotation (Booth)."""
    s = u + u
    f = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        c = s[j]
        i = f[j - k - 1]
        while i != -1 and c != s[k + i + 1]:
            if c < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if c != s[k + i + 1]:
            if c < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def lyndon_root(t: bytes, start: int, period: int) -> int:
    """Position d in [start..start+period) where the Lyndon root of the periodic region begins."""
    if period < 1 or start < 0 or start + period > len(t):
        raise ValueError(f"bad periodic region start={start} period={period}")
    block = t[start : start + period]
    if not is_primitive(block):
        raise ValueError(f"period string {block!r} is not primitive")
    return start + minimal_rotation(block)


def _divisors_below(p: int) -> list[int]:
    out = []
    d = 1
    while d * d <= p:
        if p % d == 0:
            out.append(d)
            if d != p // d:
                out.append(p // d)
        d += 1
    return sorted(x for x in out if x < p)


def compute_runs(t: bytes, index: TextIndex | None = None) -> list[Run]:
    """All runs of `t`, sorted by (start, period).

    For each candidate period p the probes at positions 0, p, 2p, ... are extended with
    forward and backward longest-common-extension queries.
    """
    n = len(t)
    if n < 2:
        return []
    fwd = index if index is not None else TextIndex(t)
    bwd = TextIndex(t[::-1])
    found: set[tuple[int, int, int]] = set()
    for p in range(1, n // 2 + 1):
        divisors = _divisors_below(p)
        for q in range(0, n - p + 1, p):
            ext_right = fwd.lcp(q, q + p)
            # common suffix of t[:q] and t[:q+p], read on the reversed text
            ext_left = bwd.lcp(n - q, n - q - p) if q > 0 else 0
            if ext_left + ext_right < p:
                continue
            s, e = q - ext_left, q + p + ext_right - 1
            if any(fwd.lcp(s, s + d) >= e - s + 1 - d for d in divisors):
                continue
            found.add((s, e, p))
    runs = []
    for s, e, p in sorted(found, key=lambda r: (r[0], r[2])):
        runs.append(Run(s, e, p, lyndon_root(t, s, p) - s))
    return runs


def tau_runs(runs: list[Run], tau: int) -> list[Run]:
    if tau < 1:
        raise ValueError(f"tau must be positive, got {tau}")
    return [r for r in runs if r.length >= 3 * tau - 1 and 3 * r.period <= tau]


def misper(s: bytes, i: int, j: int, limit: int | None = None) -> tuple[list[int], list[int]]:
    """Misperiods of `s` with respect to the period string s[i:j).

    Returns the `limit` closest misperiods on each side, both lists ascending.
    Positions inside [i..j) are never misperiods.
    """
    if not 0 <= i < j <= len(s):
        raise ValueError(f"misper needs 0 <= i < j <= |S|, got i={i} j={j}")
    p = j - i
    cap = len(s) if limit is None else limit
    left: list[int] = []
    a = i - 1
    while a >= 0 and len(left) < cap:
        if s[a] != s[i + (a - i) % p]:
            left.append(a)
        a -= 1
    right: list[int] = []
    a = j
    while a < len(s) and len(right) < cap:
        if s[a] != s[i + (a - i) % p]:
            right.append(a)
        a += 1
    left.reverse()
    return left, right
