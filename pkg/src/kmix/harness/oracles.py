"""Brute-force answers the indexes are checked against."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from kmix.core.config import settings
from kmix.strings import hamming, misper, smallest_period


def _windows(text: bytes, m: int) -> np.ndarray:
    return sliding_window_view(np.frombuffer(text, dtype=np.uint8), m)


def brute_kmismatch(text: bytes, pattern: bytes, k: int) -> list[int]:
    """Every j with at most k mismatches between T[j..j+m) and P."""
    n, m = len(text), len(pattern)
    if m == 0:
        return list(range(n + 1))
    if m > n:
        return []
    p = np.frombuffer(pattern, dtype=np.uint8)
    distances = (_windows(text, m) != p).sum(axis=1)
    return np.flatnonzero(distances <= k).tolist()


def brute_wildcard(text: bytes, pattern: bytes, wildcard_byte: int | None = None) -> list[int]:
    """Every j where P matches T[j..j+m), the wildcard matching any byte."""
    wild = settings.wildcard_byte if wildcard_byte is None else wildcard_byte
    n, m = len(text), len(pattern)
    if m == 0:
        return list(range(n + 1))
    if m > n:
        return []
    p = np.frombuffer(pattern, dtype=np.uint8)
    fixed = p != wild
    clashes = ((_windows(text, m) != p) & fixed).sum(axis=1)
    return np.flatnonzero(clashes == 0).tolist()


@dataclass(frozen=True)
class NearPeriodicWitness:
    block: int
    period: int
    pattern_misperiods: int
    window_misperiods: int


def classify_nearly_periodic(
    text: bytes,
    pattern: bytes,
    j: int,
    k: int,
    gamma: int,
    *,
    explain: bool = False,
) -> bool | tuple[bool, NearPeriodicWitness | None]:
    """Whether T[j..j+m) is a k-nearly periodic occurrence of P.

    Some block P[i*gamma..(i+1)*gamma), i in [0..k], must have smallest period p with
    3p <= tau, occur unchanged in the window, and the mismatches must be exactly the
    misperiods of P plus those of the window, both taken against that block's period.
    """
    m = len(pattern)
    window = text[j : j + m]
    if len(window) != m:
        raise ValueError(f"window at {j} runs past the end of the text")
    distance = hamming(window, pattern)
    if distance > k:
        raise ValueError(f"position {j} is not a {k}-mismatch occurrence ({distance})")
    tau = max(1, gamma // 3)
    witness = None
    for i in range(k + 1):
        lo, hi = i * gamma, (i + 1) * gamma
        if hi > m:
            break
        block = pattern[lo:hi]
        p = smallest_period(block)
        if 3 * p > tau or window[lo:hi] != block:
            continue
        x_left, x_right = misper(pattern, lo, lo + p)
        y_left, y_right = misper(window, lo, lo + p)
        x_size, y_size = len(x_left) + len(x_right), len(y_left) + len(y_right)
        if distance == x_size + y_size:
            witness = NearPeriodicWitness(i, p, x_size, y_size)
            break
    if explain:
        return witness is not None, witness
    return witness is not None
