"""Rank/select over increasing sequences and bit vectors, range reporting, stabbing.

Space is reported in bits next to each structure; the arrays themselves are plain.
"""

from __future__ import annotations

import bisect
import math
from collections.abc import Iterable, Sequence
from typing import Any

import numpy as np

WORD = 64


class IncreasingSeq:
    """Strictly increasing a_1 < ... < a_l in [1..r] with restricted rank and select."""

    def __init__(self, values: Iterable[int], r: int):
        self.values = list(values)
        self.r = r
        prev = 0
        for v in self.values:
            if v <= prev or v > r:
                raise ValueError(f"sequence must be strictly increasing within [1..{r}]")
            prev = v
        self._rank = {v: i + 1 for i, v in enumerate(self.values)}

    def __len__(self) -> int:
        return len(self.values)

    def rank(self, x: int) -> int | None:
        """i with a_i = x, or None when x is not in the sequence."""
        return self._rank.get(x)

    def select(self, i: int) -> int:
        if not 1 <= i <= len(self.values):
            raise IndexError(f"select({i}) outside [1..{len(self.values)}]")
        return self.values[i - 1]

    def bits(self) -> int:
        """Size of an Elias-Fano style encoding: l * (2 + ceil(log(r/l)))."""
        length = len(self.values)
        if length == 0:
            return 0
        return length * (2 + max(0, math.ceil(math.log2(self.r / length))))


class IncreasingSeqCollection:
    """A family of increasing sequences over a shared universe [1..r]."""

    def __init__(self, sequences: Iterable[Iterable[int]], r: int):
        self.r = r
        self.sequences = [IncreasingSeq(s, r) for s in sequences]

    def __len__(self) -> int:
        return len(self.sequences)

    def __getitem__(self, i: int) -> IncreasingSeq:
        return self.sequences[i]

    def total_length(self) -> int:
        return sum(len(s) for s in self.sequences)

    def bits(self) -> int:
        return sum(s.bits() for s in self.sequences) + WORD * len(self.sequences)

    def jensen_bound(self) -> float:
        """l * (1 + log(c*r/l)) for the combined length l of c sequences."""
        total = self.total_length()
        if total == 0:
            return 0.0
        return total * (1 + math.log2(len(self.sequences) * self.r / total))


class BitVector:
    """Static bit vector with 1-based rank_q(x) and select_q(i), q in {0, 1}."""

    def __init__(self, bits: Sequence[int]):
        self.n = len(bits)
        self.words: list[int] = []
        for start in range(0, self.n, WORD):
            w = 0
            for j, b in enumerate(bits[start : start + WORD]):
                if b:
                    w |= 1 << j
            self.words.append(w)
        self.cum = [0]
        for w in self.words:
            self.cum.append(self.cum[-1] + w.bit_count())

    def __len__(self) -> int:
        return self.n

    @property
    def ones(self) -> int:
        return self.cum[-1]

    def __getitem__(self, i: int) -> int:
        """Bit at 1-based position i."""
        if not 1 <= i <= self.n:
            raise IndexError(f"position {i} outside [1..{self.n}]")
        i -= 1
        return (self.words[i // WORD] >> (i % WORD)) & 1

    def rank(self, q: int, x: int) -> int:
        """|{i in [1..x] : B[i] = q}|."""
        if not 0 <= x <= self.n:
            raise IndexError(f"rank position {x} outside [0..{self.n}]")
        w, off = divmod(x, WORD)
        ones = self.cum[w]
        if off:
            ones += (self.words[w] & ((1 << off) - 1)).bit_count()
        return ones if q == 1 else x - ones

    def select(self, q: int, i: int) -> int:
        """Position of the i-th bit equal to q."""
        total = self.ones if q == 1 else self.n - self.ones
        if not 1 <= i <= total:
            raise IndexError(f"select_{q}({i}) outside [1..{total}]")
        lo, hi = 0, len(self.words)
        while lo < hi:
            mid = (lo + hi) // 2
            ones = self.cum[mid + 1]
            before = ones if q == 1 else min(self.n, (mid + 1) * WORD) - ones
            if before < i:
                lo = mid + 1
            else:
                hi = mid
        w = lo
        seen = self.cum[w] if q == 1 else w * WORD - self.cum[w]
        word = self.words[w]
        for j in range(WORD):
            if ((word >> j) & 1) == q:
                seen += 1
                if seen == i:
                    return w * WORD + j + 1
        raise AssertionError("select directory out of sync")

    def bits(self) -> int:
        return self.n + WORD * len(self.cum)


class RangeReport2D:
    """Static merge tree answering inclusive orthogonal range queries."""

    def __init__(self, points: Sequence[tuple[int, int, Any]]):
        order = sorted(range(len(points)), key=lambda i: (points[i][0], points[i][1]))
        self.payloads = [points[i][2] for i in order]
        self.xs = [points[i][0] for i in order]
        ys = np.asarray([points[i][1] for i in order], dtype=np.int64)
        self.size = 1
        while self.size < max(1, len(order)):
            self.size *= 2
        empty = np.zeros(0, dtype=np.int64)
        self.node_y: list[np.ndarray] = [empty] * (2 * self.size)
        self.node_idx: list[np.ndarray] = [empty] * (2 * self.size)
        for j in range(len(order)):
            self.node_y[self.size + j] = ys[j : j + 1]
            self.node_idx[self.size + j] = np.asarray([j], dtype=np.int64)
        for v in range(self.size - 1, 0, -1):
            y = np.concatenate((self.node_y[2 * v], self.node_y[2 * v + 1]))
            idx = np.concatenate((self.node_idx[2 * v], self.node_idx[2 * v + 1]))
            perm = np.argsort(y, kind="stable")
            self.node_y[v] = y[perm]
            self.node_idx[v] = idx[perm]

    def __len__(self) -> int:
        return len(self.xs)

    def _report(self, v: int, y1: int, y2: int, out: list[Any]) -> None:
        ys = self.node_y[v]
        a = int(np.searchsorted(ys, y1, side="left"))
        b = int(np.searchsorted(ys, y2, side="right"))
        out.extend(self.payloads[int(i)] for i in self.node_idx[v][a:b])

    def query(self, x1: int, x2: int, y1: int, y2: int) -> list[Any]:
        """Payloads of points with x1 <= x <= x2 and y1 <= y <= y2."""
        if x1 > x2 or y1 > y2 or not self.xs:
            return []
        lo = bisect.bisect_left(self.xs, x1) + self.size
        hi = bisect.bisect_right(self.xs, x2) + self.size
        out: list[Any] = []
        while lo < hi:
            if lo & 1:
                self._report(lo, y1, y2, out)
                lo += 1
            if hi & 1:
                hi -= 1
                self._report(hi, y1, y2, out)
            lo //= 2
            hi //= 2
        return out


class StabStruct:
    """Intervals [l..r] as points (l, r); stab(a) reports those with l <= a <= r."""

    def __init__(self, intervals: Sequence[tuple[int, int, Any]]):
        for lo, hi, _ in intervals:
            if lo > hi:
                raise ValueError(f"interval [{lo}..{hi}] is inverted")
        self.intervals = list(intervals)
        self._grid = RangeReport2D(intervals)
        lows = [lo for lo, _, _ in intervals]
        highs = [hi for _, hi, _ in intervals]
        self._min = min(lows, default=0)
        self._max = max(highs, default=0)

    def __len__(self) -> int:
        return len(self.intervals)

    def stab(self, a: int) -> list[Any]:
        if not self.intervals:
            return []
        return self._grid.query(self._min, a, a, self._max)
