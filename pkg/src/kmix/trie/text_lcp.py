"""Suffix array, LCP array and constant-time LCP between text suffixes."""

from __future__ import annotations

import numpy as np


def ilog2(value: int) -> int:
    """Integral part of the base-2 logarithm of a positive integer."""
    return value.bit_length() - 1


def suffix_array(data: bytes) -> np.ndarray:
    """Suffix array by prefix doubling over (rank, rank shifted by k) pairs."""
    n = len(data)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rank = np.frombuffer(data, dtype=np.uint8).astype(np.int64) + 1
    k = 1
    while True:
        second = np.zeros(n, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:]
        order = np.lexsort((second, rank))
        changed = (np.diff(rank[order]) != 0) | (np.diff(second[order]) != 0)
        new_rank = np.empty(n, dtype=np.int64)
        new_rank[order] = np.concatenate(([1], 1 + np.cumsum(changed)))
        rank = new_rank
        if rank.max() == n or k >= n:
            break
        k *= 2
    return order.astype(np.int64)


def lcp_array(data: bytes, sa: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Kasai: returns (rank, lcp) with lcp[r] = LCP(sa[r-1], sa[r]) and lcp[0] = 0."""
    n = len(sa)
    rank = np.empty(n, dtype=np.int64)
    rank[sa] = np.arange(n, dtype=np.int64)
    sa_list = sa.tolist()
    rank_list = rank.tolist()
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank_list[i]
        if r == 0:
            h = 0
            continue
        j = sa_list[r - 1]
        while i + h < n and j + h < n and data[i + h] == data[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return rank, np.asarray(lcp, dtype=np.int64)


class SparseMin:
    """Range-minimum over a fixed integer array using a sparse table."""

    def __init__(self, values: np.ndarray):
        self.levels = [np.asarray(values, dtype=np.int64)]
        length = len(values)
        depth = 1
        while (1 << depth) <= length:
            prev = self.levels[-1]
            half = 1 << (depth - 1)
            self.levels.append(np.minimum(prev[:-half], prev[half:]))
            depth += 1

    def query(self, start: int, stop: int) -> int:
        """Minimum of values[start:stop); the range must be non-empty."""
        depth = ilog2(stop - start)
        table = self.levels[depth]
        return int(min(table[start], table[stop - (1 << depth)]))


class TextIndex:
    """Suffix array, inverse suffix array, LCP array and RMQ for one byte string."""

    def __init__(self, data: bytes):
        self.data = data
        self.n = len(data)
        self.sa = suffix_array(data)
        self.rank, self.lcp_values = lcp_array(data, self.sa)
        self._rmq = SparseMin(self.lcp_values) if self.n else None
        self._rank_list = self.rank.tolist()
        self.probes = 0

    def lcp(self, i: int, j: int) -> int:
        """LCP(data[i:], data[j:]); either index may equal n."""
        self.probes += 1
        if i == j:
            return self.n - i
        if i >= self.n or j >= self.n:
            return 0
        ri, rj = self._rank_list[i], self._rank_list[j]
        if ri > rj:
            ri, rj = rj, ri
        return self._rmq.query(ri + 1, rj + 1)

    def suffix_rank(self, i: int) -> int:
        """Lexicographic rank of data[i:]; the empty suffix ranks -1."""
        return -1 if i >= self.n else self._rank_list[i]

    def char(self, i: int) -> int:
        return self.data[i]
