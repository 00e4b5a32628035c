"""Tests for synchronizing sets, anchors and the long-pattern index."""

import random

import pytest
from fixtures import patterns_from, random_text

from kmix.harness.oracles import brute_kmismatch, classify_nearly_periodic
from kmix.long import (
    LongIndex,
    build_anchors,
    build_long_index,
    build_sync_set,
    pattern_anchors,
    query_long,
)
from kmix.long.anchors import sync_violations
from kmix.long.near_periodic import Progression


def test_sync_set_unary_text_is_empty():
    """Every window of 'a'*20 is periodic, so nothing is synchronizing."""
    assert build_sync_set(b"a" * 20, 3).positions == []


def test_sync_set_distinct_bytes_is_dense():
    """Without periodic windows every tau-window holds an anchor."""
    text = bytes(range(20))
    sync = build_sync_set(text, 2)
    for i in range(len(text) - 3 * 2 + 2):
        assert any(a in sync for a in range(i, i + 2))
    assert sync_violations(text, 2, sync.positions) == []


def test_sync_set_random_texts():
    """Consistency and density on random and forced-periodic binary texts."""
    rng = random.Random(6)
    for trial in range(120):
        n = rng.randint(12, 90)
        if trial % 3 == 0:
            unit = bytes(rng.choice(b"ab") for _ in range(rng.randint(1, 3)))
            text = bytearray((unit * n)[:n])
            text[rng.randrange(n)] = rng.choice(b"ab")
            text = bytes(text)
        else:
            text = bytes(rng.choice(b"ab") for _ in range(n))
        for tau in (2, 3, 5):
            if tau <= n // 2:
                sync = build_sync_set(text, tau)
                assert sync_violations(text, tau, sync.positions) == []


def test_sync_set_next_anchor():
    """next_anchor_at finds the smallest anchor at or after a position."""
    sync = build_sync_set(bytes(range(30)), 3)
    for i in range(30):
        later = [a for a in sync.positions if a >= i]
        assert sync.next_anchor_at(i) == (later[0] if later else None)
    assert sync.next_anchor_at(-1) is None


def test_sync_set_rejects_large_tau():
    """tau may not exceed n/2."""
    with pytest.raises(ValueError, match="tau"):
        build_sync_set(b"abcdef", 4)


def test_anchors_unary_text_are_empty():
    """A unary run has no misperiods and no synchronizing positions."""
    anchors = build_anchors(b"a" * 40, 9, 1)
    assert anchors.a1 == []
    assert anchors.a2 == []
    assert anchors.sizes()["tau_runs"] == 1


def test_anchors_misperiod_between_runs():
    """The byte separating two period-2 runs is a misperiod of both."""
    m = 20
    text = b"ab" * m + b"c" + b"ab" * m
    anchors = build_anchors(text, 18, 1)
    assert 2 * m in anchors.a2
    assert {39, 41} <= set(anchors.a2)


def test_anchors_reject_gamma_out_of_range():
    """gamma must lie in [2..n/(k+1)]."""
    with pytest.raises(ValueError, match="gamma"):
        build_anchors(b"abcdefgh", 5, 1)
    with pytest.raises(ValueError, match="gamma"):
        build_anchors(b"abcdefgh", 1, 1)


def test_pattern_anchors():
    """Verbatim substrings get a B1 anchor; foreign patterns get none."""
    text = random_text(200, 4, seed=12)
    index = LongIndex(text, 8, 1)
    found = pattern_anchors(index.anchors, index.host, text[50:66])
    assert len(found.b1) >= 1
    foreign = pattern_anchors(index.anchors, index.host, bytes(range(200, 216)))
    assert foreign.b1 == []
    assert foreign.b2 == []
    with pytest.raises(ValueError, match="shorter"):
        pattern_anchors(index.anchors, index.host, text[:15])


def test_pattern_anchor_set_sizes():
    """|B1| <= k+1 and |B2| <= 2(k+1)^2 on fuzzed patterns."""
    k = 2
    text = random_text(150, 2, seed=13)
    index = LongIndex(text, 9, k)
    for pattern in patterns_from(text, 40, (27, 40), k, seed=14):
        found = pattern_anchors(index.anchors, index.host, pattern)
        assert len(found.b1) <= k + 1
        assert len(found.b2) <= 2 * (k + 1) ** 2


def test_progression_starts():
    """Starts of a progression clipped by the window end range."""
    prog = Progression(alpha=2, beta=20, end_lo=30, end_hi=40, period=3)
    assert list(prog.starts(20)) == [11, 14, 17, 20]
    assert list(prog.starts(5)) == []


@pytest.mark.parametrize("sigma,k,gamma", [(2, 1, 8), (4, 1, 8), (2, 2, 8), (2, 1, 9), (4, 2, 6)])
def test_long_index_matches_brute_force(sigma, k, gamma):
    """Exact equality with a scan; multiplicity stays under the bound."""
    text = random_text(140, sigma, seed=sigma * 31 + k + gamma)
    index = build_long_index(text, gamma, k)
    low = (k + 1) * gamma
    for pattern in patterns_from(text, 40, (low, low + 12), k, seed=gamma + k):
        assert query_long(index, pattern) == brute_kmismatch(text, pattern, k)
        assert max(index.last_multiplicity.values(), default=0) <= 64 * (k + 1) ** 3


def test_long_index_periodic_text():
    """On a periodic text the nearly periodic phase finds every occurrence."""
    text = b"ab" * 64
    pattern = bytearray(b"ab" * 30)
    pattern[35] = ord("a")
    pattern = bytes(pattern)
    index = LongIndex(text, 18, 2)
    expected = list(range(0, 69, 2))
    assert brute_kmismatch(text, pattern, 2) == expected
    assert index.query(pattern) == expected
    near = set(index.near.query(pattern))
    for j in expected:
        assert classify_nearly_periodic(text, pattern, j, 2, 18)
        assert j in near


def test_long_index_near_phase_ignores_aperiodic_patterns():
    """Blocks that are not highly periodic contribute nothing to the nearly periodic phase."""
    text = random_text(120, 4, seed=15)
    index = LongIndex(text, 8, 1)
    assert index.near.query(text[10:30]) == []


def test_long_index_rejects_short_patterns():
    """Patterns shorter than (k+1)*gamma belong to another index."""
    index = LongIndex(random_text(60, 2, seed=1), 6, 1)
    assert index.min_pattern_length == 12
    with pytest.raises(ValueError, match="shorter"):
        index.query(b"ab" * 5)
    assert index.query(b"a" * 61) == []


def test_anchor_coverage():
    """Occurrences that are not nearly periodic start at a - b for anchors of one family."""
    k, gamma = 1, 9
    rng = random.Random(16)
    for seed in range(4):
        text = bytearray(random_text(120, 2, seed=seed))
        # plant periodic stretches so both families have work
        start = rng.randrange(60)
        text[start : start + 40] = b"a" * 40
        text = bytes(text)
        index = LongIndex(text, gamma, k)
        a1, a2 = set(index.anchors.a1), set(index.anchors.a2)
        for pattern in patterns_from(text, 30, (18, 30), k, seed=seed):
            found = pattern_anchors(index.anchors, index.host, pattern)
            starts = {a - b for a in a1 for b in found.b1}
            starts |= {a - b for a in a2 for b in found.b2}
            for j in brute_kmismatch(text, pattern, k):
                if not classify_nearly_periodic(text, pattern, j, k, gamma):
                    assert j in starts


def test_classify_nearly_periodic():
    """Unary matches are nearly periodic; aperiodic blocks never are."""
    assert all(
        classify_nearly_periodic(b"a" * 60, b"a" * 20, j, 1, 9) for j in range(41)
    )
    ok, witness = classify_nearly_periodic(b"a" * 60, b"a" * 20, 0, 1, 9, explain=True)
    assert ok
    assert witness.period == 1
    assert witness.block == 0
    text = random_text(80, 4, seed=17)
    assert not classify_nearly_periodic(text, text[5:25], 5, 1, 8)
    with pytest.raises(ValueError, match="not a 1-mismatch occurrence"):
        classify_nearly_periodic(b"ab" * 20, b"ba" * 10, 0, 1, 8)
