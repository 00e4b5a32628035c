"""Randomized equivalence runs against the brute-force oracles, and the space report."""

from __future__ import annotations

import logging
import math
import random
import time
from collections.abc import Callable
from dataclasses import dataclass, field

import pandas as pd

from kmix.compact_index import CompactIndex
from kmix.core.config import settings
from kmix.core.errors import SelfCheckError
from kmix.harness.container import IndexParams
from kmix.harness.oracles import brute_kmismatch, brute_wildcard
from kmix.harness.registry import BuiltIndex, build_index

logger = logging.getLogger(__name__)

SUITES = ("oracle", "space", "all")


def alphabet_for(sigma: int) -> bytes:
    if not 1 <= sigma <= 192:
        raise ValueError(f"sigma must be in [1..192], got {sigma}")
    if sigma <= 26:
        return bytes(range(ord("a"), ord("a") + sigma))
    # starts above '?', the default wildcard
    return bytes(range(64, 64 + sigma))


def random_text(n: int, sigma: int, rng: random.Random) -> bytes:
    letters = alphabet_for(sigma)
    return bytes(rng.choice(letters) for _ in range(n))


def mutate(source: bytes, count: int, letters: bytes, rng: random.Random) -> bytes:
    """Up to `count` random substitutions."""
    out = bytearray(source)
    for _ in range(count):
        if out:
            out[rng.randrange(len(out))] = rng.choice(letters)
    return bytes(out)


def sample_patterns(
    text: bytes, lengths: tuple[int, int], count: int, k: int, rng: random.Random
) -> list[bytes]:
    """Half taken from the text with at most k substitutions, half uniformly random."""
    letters = bytes(sorted(set(text)))
    lo, hi = lengths
    hi = min(hi, len(text))
    out = []
    for i in range(count):
        m = rng.randint(lo, hi) if lo <= hi else hi
        if i % 2 == 0:
            start = rng.randrange(len(text) - m + 1)
            out.append(mutate(text[start : start + m], rng.randint(0, k), letters, rng))
        else:
            out.append(bytes(rng.choice(letters) for _ in range(m)))
    return out


def minimize_pattern(pattern: bytes, fails: Callable[[bytes], bool]) -> bytes:
    """Shortest pattern reachable by single-byte deletions that keep failing."""
    current = pattern
    shrunk = True
    while shrunk:
        shrunk = False
        for i in range(len(current)):
            candidate = current[:i] + current[i + 1 :]
            if fails(candidate):
                current = candidate
                shrunk = True
                break
    return current


@dataclass
class Failure:
    kind: str
    pattern: bytes
    expected: list[int]
    got: list[int] | None
    minimized: bytes
    error: str = ""

    def describe(self) -> str:
        got = self.error or self.got
        return (
            f"[{self.kind}] pattern={self.pattern!r} expected={self.expected} got={got} "
            f"minimized={self.minimized!r}"
        )


@dataclass
class SelftestReport:
    summary: pd.DataFrame
    failures: list[Failure] = field(default_factory=list)
    space: pd.DataFrame | None = None

    @property
    def ok(self) -> bool:
        return not self.failures


def _check(built: BuiltIndex, oracle: Callable[[bytes], list[int]], pattern: bytes) -> bool:
    try:
        return built.query(pattern) == oracle(pattern)
    except ValueError:
        # a shrunk pattern outside the kind's length range is not a counterexample
        return True
    except SelfCheckError:
        return False


def _run_kind(
    name: str,
    built: BuiltIndex,
    oracle: Callable[[bytes], list[int]],
    patterns: list[bytes],
) -> tuple[dict[str, object], list[Failure]]:
    failures = []
    start = time.perf_counter()
    for pattern in patterns:
        expected = oracle(pattern)
        try:
            got: list[int] | None = built.query(pattern)
            error = ""
        except SelfCheckError as exc:
            got, error = None, f"SelfCheckError: {exc}"
        if got != expected:
            minimized = minimize_pattern(pattern, lambda p: not _check(built, oracle, p))
            failures.append(Failure(name, pattern, expected, got, minimized, error))
            logger.warning("selftest mismatch for %s on %r", name, pattern)
    row = {
        "kind": name,
        "cases": len(patterns),
        "mismatches": len(failures),
        "seconds": round(time.perf_counter() - start, 3),
    }
    return row, failures


def run_oracle_suite(
    n: int, sigma: int, k: int, seed: int, *, patterns: int = 40
) -> tuple[pd.DataFrame, list[Failure]]:
    rng = random.Random(seed)
    text = random_text(n, sigma, rng)

    def kmismatch(pattern: bytes) -> list[int]:
        return brute_kmismatch(text, pattern, k)

    def wildcard(pattern: bytes) -> list[int]:
        return brute_wildcard(text, pattern, wild)

    wild = settings.wildcard_byte
    short_max = min(n, 16)
    plans: list[tuple[str, IndexParams, Callable[[bytes], list[int]], list[bytes]]] = []
    generic = sample_patterns(text, (1, min(n, 4 * (k + 1) + 8)), patterns, k, rng)
    plans.append(("errata", IndexParams(k), kmismatch, generic))
    plans.append(("compact", IndexParams(k), kmismatch, generic))
    wildcarded = []
    for p in generic:
        marks = bytearray(p)
        for _ in range(rng.randint(0, min(k, len(marks)))):
            marks[rng.randrange(len(marks))] = wild
        wildcarded.append(bytes(marks))
    plans.append(("wild", IndexParams(k, wildcard=wild), wildcard, wildcarded))
    if k >= 2:
        short = sample_patterns(text, (1, short_max), patterns, k, rng)
        plans.append(("short", IndexParams(k, mu=short_max, h=1), kmismatch, short))
    gamma = min(8, n // (k + 1))
    if gamma >= 2:
        low = (k + 1) * gamma
        long_patterns = sample_patterns(text, (low, low + 16), patterns, k, rng)
        plans.append(("long", IndexParams(k, gamma=gamma), kmismatch, long_patterns))
    rows, failures = [], []
    for name, params, oracle, cases in plans:
        built = build_index(name, text, params)
        row, found = _run_kind(name, built, oracle, cases)
        rows.append(row)
        failures.extend(found)
    return pd.DataFrame(rows), failures


def space_report(ns: list[int], k: int, sigma: int, seed: int) -> pd.DataFrame:
    """Terminal counts of the compact index against the n log^(k-1) n model."""
    rng = random.Random(seed)
    rows = []
    for n in ns:
        index = CompactIndex(random_text(n, sigma, rng), k)
        stats = index.stats()
        model = n * math.log2(n) ** (k - 1)
        rows.append(
            {
                "n": n,
                "terminals": stats["terminals"],
                "last_level_terminals": stats["last_level_terminals"],
                "st_rank_bits": stats["st_rank_bits"],
                "model": model,
                "rank_model": n * math.log2(n) ** k,
            }
        )
    frame = pd.DataFrame(rows)
    frame["ratio"] = frame["terminals"] / frame["model"]
    frame["rank_ratio"] = frame["st_rank_bits"] / frame["rank_model"]
    frame["growth"] = frame["terminals"] / frame["terminals"].shift(1)
    frame["model_growth"] = frame["model"] / frame["model"].shift(1)
    return frame


def doubling(start: int, stop: int) -> list[int]:
    out = []
    n = start
    while n <= stop:
        out.append(n)
        n *= 2
    return out


def run_selftest(
    n: int, sigma: int, k: int, seed: int, suite: str = "oracle", *, patterns: int = 40
) -> SelftestReport:
    if suite not in SUITES:
        raise ValueError(f"Unknown suite: {suite}. Available: {list(SUITES)}")
    if n < 2:
        raise ValueError(f"selftest needs n >= 2, got {n}")
    if k < 1:
        raise ValueError(f"selftest needs k >= 1, got {k}")
    summary = pd.DataFrame(columns=["kind", "cases", "mismatches", "seconds"])
    failures: list[Failure] = []
    space = None
    if suite in ("oracle", "all"):
        summary, failures = run_oracle_suite(n, sigma, k, seed, patterns=patterns)
    if suite in ("space", "all"):
        space = space_report(doubling(64, max(64, n)), k, sigma, seed)
    logger.info(
        "selftest n=%d sigma=%d k=%d seed=%d: %d failures", n, sigma, k, seed, len(failures)
    )
    return SelftestReport(summary, failures, space)
