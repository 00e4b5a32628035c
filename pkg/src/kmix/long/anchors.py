"""Synchronizing sets and the anchor positions of the long-pattern index.

Text anchors are A1, a tau-synchronizing set, and A2, the k+1 nearest misperiods on
each side of every tau-run. Pattern anchors B1 and B2 are chosen per length-gamma
block of the pattern so that every occurrence that is not nearly periodic starts at
a - b for a pair of anchors from the same family.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from kmix.core.config import settings
from kmix.core.errors import SelfCheckError
from kmix.strings import Run, compute_runs, misper, smallest_period, tau_runs
from kmix.trie.suffix_tree import MatchingStatistics, SuffixTreeIndex
from kmix.trie.text_lcp import TextIndex

logger = logging.getLogger(__name__)

_INF = np.iinfo(np.int64).max


def is_highly_periodic(window: bytes, tau: int) -> bool:
    """per(window) <= tau/3."""
    return 3 * smallest_period(window) <= tau


@dataclass
class SyncSet:
    tau: int
    positions: list[int]
    # next_anchor[i]: smallest anchor >= i, or -1
    next_anchor: np.ndarray

    def __len__(self) -> int:
        return len(self.positions)

    def __contains__(self, i: int) -> bool:
        a = self.next_anchor_at(i)
        return a == i

    def next_anchor_at(self, i: int) -> int | None:
        if not 0 <= i < len(self.next_anchor):
            return None
        a = int(self.next_anchor[i])
        return None if a < 0 else a


def _window_ids(index: TextIndex, tau: int) -> np.ndarray:
    """Rank of T[i..i+tau) among the distinct length-tau substrings, for i in [0..n-tau]."""
    n = index.n
    ids = np.zeros(n - tau + 1, dtype=np.int64)
    rank, prev = -1, -1
    for i in index.sa.tolist():
        if i > n - tau:
            continue
        if prev < 0 or index.lcp(prev, i) < tau:
            rank += 1
        ids[i] = rank
        prev = i
    return ids


def sync_violations(text: bytes, tau: int, positions: list[int]) -> list[str]:
    """Consistency and density conditions evaluated directly; empty when both hold."""
    n = len(text)
    members = set(positions)
    problems: list[str] = []
    seen: dict[bytes, bool] = {}
    for i in range(n - 2 * tau + 1):
        key = text[i : i + 2 * tau]
        inside = i in members
        if seen.setdefault(key, inside) != inside:
            problems.append(f"consistency: window {key!r} at {i} disagrees")
    for i in range(n - 3 * tau + 2):
        empty = not any(a in members for a in range(i, i + tau))
        periodic = is_highly_periodic(text[i : i + 3 * tau - 1], tau)
        if empty != periodic:
            problems.append(f"density: window at {i} empty={empty} periodic={periodic}")
    return problems


def build_sync_set(text: bytes, tau: int, *, index: TextIndex | None = None) -> SyncSet:
    """tau-synchronizing set by the minimizer rule.

    phi(i) is the rank of T[i..i+tau), or infinity when that window has period at most
    tau/3; i is an anchor iff the minimum of phi over [i..i+tau] is finite and attained
    at i or at i+tau.
    """
    n = len(text)
    if not 1 <= tau <= n // 2:
        raise ValueError(f"tau must be in [1..{n // 2}], got {tau}")
    index = index or TextIndex(text)
    phi = _window_ids(index, tau)
    for i in range(len(phi)):
        if is_highly_periodic(text[i : i + tau], tau):
            phi[i] = _INF
    lows = sliding_window_view(phi, tau + 1).min(axis=1)
    left = phi[: len(lows)]
    right = phi[tau : tau + len(lows)]
    chosen = (lows != _INF) & ((left == lows) | (right == lows))
    positions = np.flatnonzero(chosen).astype(np.int64)
    nxt = np.full(n + 1, -1, dtype=np.int64)
    at = np.searchsorted(positions, np.arange(n + 1), side="left")
    found = at < len(positions)
    nxt[found] = positions[at[found]]
    sync = SyncSet(tau, positions.tolist(), nxt)
    if settings.checks_enabled:
        problems = sync_violations(text, tau, sync.positions)
        if problems:
            logger.warning("synchronizing set check failed: %s", problems[:3])
            raise SelfCheckError(f"synchronizing set violates {problems[0]}")
    logger.info("sync set: n=%d tau=%d size=%d", n, tau, len(sync))
    return sync


@dataclass
class AnchorSets:
    gamma: int
    k: int
    tau: int
    sync: SyncSet
    a1: list[int]
    a2: list[int]
    runs: list[Run] = field(default_factory=list)

    def sizes(self) -> dict[str, int]:
        return {"A1": len(self.a1), "A2": len(self.a2), "tau_runs": len(self.runs)}


def tau_for(gamma: int) -> int:
    return max(1, gamma // 3)


def check_gamma(n: int, gamma: int, k: int) -> None:
    top = n // (k + 1)
    if not 2 <= gamma <= top:
        raise ValueError(f"gamma must be in [2..{top}] for n={n} k={k}, got {gamma}")


def build_anchors(
    text: bytes, gamma: int, k: int, *, index: TextIndex | None = None
) -> AnchorSets:
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    check_gamma(len(text), gamma, k)
    tau = tau_for(gamma)
    if 3 * tau > gamma + 2:
        raise SelfCheckError(f"tau={tau} leaves blocks of length {gamma} without a 3*tau-1 window")
    index = index or TextIndex(text)
    sync = build_sync_set(text, tau, index=index)
    runs = tau_runs(compute_runs(text, index), tau)
    a2: set[int] = set()
    for run in runs:
        left, right = misper(text, run.start, run.start + run.period, k + 1)
        a2.update(left)
        a2.update(right)
    anchors = AnchorSets(gamma, k, tau, sync, list(sync.positions), sorted(a2), runs)
    logger.info("anchors: gamma=%d tau=%d %s", gamma, tau, anchors.sizes())
    return anchors


@dataclass
class PatternAnchors:
    b1: list[int]
    b2: list[int]


def pattern_anchors(
    anchors: AnchorSets,
    host: SuffixTreeIndex,
    pattern: bytes,
    ms: MatchingStatistics | None = None,
) -> PatternAnchors:
    """B1 and B2 of a pattern of length at least (k+1) * gamma."""
    gamma, k, tau = anchors.gamma, anchors.k, anchors.tau
    m = len(pattern)
    if m < (k + 1) * gamma:
        raise ValueError(f"pattern of length {m} is shorter than (k+1)*gamma={(k + 1) * gamma}")
    ms = ms or host.matching_statistics(pattern)
    b1: list[int] = []
    b2: set[int] = set()
    for i in range(k + 1):
        lo = i * gamma
        if ms.lengths[lo] < gamma:
            continue
        # any occurrence of the block shows where its leftmost synchronizing fragment is
        ell = ms.positions[lo]
        a = anchors.sync.next_anchor_at(ell)
        if a is not None and a - ell <= gamma - 2 * tau:
            b1.append(a - ell + lo)
        p = smallest_period(pattern[lo : lo + gamma])
        if 3 * p <= tau:
            left, right = misper(pattern, lo, lo + p, k + 1)
            b2.update(left)
            b2.update(right)
    return PatternAnchors(sorted(set(b1)), sorted(b2))
