"""Tests for the short-pattern index."""

import pytest
from fixtures import patterns_from, random_text

from kmix.core.config import settings
from kmix.harness.oracles import brute_kmismatch
from kmix.short_index import (
    ShortIndex,
    build_short_index,
    f_pow2,
    f_sequence,
    modified_suffixes,
    predicted_terminals,
    query_short,
    query_short_basic,
    substitution_alphabet,
)
from kmix.strings import PSI, ModifiedFragment
from kmix.trie.text_lcp import ilog2


def test_f_pow2():
    """Largest power of two dividing t."""
    assert f_pow2(12) == 4
    assert f_pow2(8) == 8
    assert f_pow2(13) == 1
    with pytest.raises(ValueError):
        f_pow2(0)


def test_f_sequence():
    """Iterating t - f(t) down to zero."""
    assert f_sequence(13) == [13, 12, 8]
    assert f_sequence(6) == [6, 4]
    assert f_sequence(1) == [1]
    with pytest.raises(ValueError):
        f_sequence(0)


def test_f_sequence_intervals_tile_prefix():
    """Base intervals [t - f(t), t) of the f-sequence tile [0, j) without overlap."""
    for j in range(1, 2**11):
        seq = f_sequence(j)
        assert len(seq) <= ilog2(j) + 1
        covered = []
        for t in seq:
            covered.extend(range(t - f_pow2(t), t))
        assert sorted(covered) == list(range(j))


def test_substitution_alphabet_adds_placeholder():
    """Bytes absent from the text are represented by one extra symbol."""
    assert substitution_alphabet(b"abab") == [ord("a"), ord("b"), PSI]
    assert substitution_alphabet(bytes(range(256)))[-1] == 255


def test_predicted_terminals_counts_modified_suffixes():
    """The prediction equals the number of enumerated copies."""
    text = b"ab" * 8
    alphabet = substitution_alphabet(text)
    assert predicted_terminals(16, 4, 1, len(alphabet)) == 16 + 2 * (13 * 4 + 3 + 2 + 1)
    enumerated = sum(1 for kappa in range(2) for _ in modified_suffixes(text, kappa, 4, alphabet))
    assert enumerated == predicted_terminals(16, 4, 1, len(alphabet))


def test_short_index_rejects_bad_parameters():
    """h must lie in [1..k) and mu in [1..n]."""
    with pytest.raises(ValueError, match="1 <= h < k"):
        ShortIndex(b"banana", 4, 2, 2)
    with pytest.raises(ValueError, match="mu"):
        ShortIndex(b"banana", 7, 1, 2)


def test_short_index_budget(monkeypatch):
    """Builds predicted to exceed the copy budget are refused."""
    monkeypatch.setattr(settings, "TERMINAL_BUDGET", 10)
    with pytest.raises(ValueError, match="TERMINAL_BUDGET"):
        ShortIndex(b"banana", 4, 1, 2)


def test_short_index_banana():
    """Grouped and basic queries agree with a scan."""
    index = build_short_index(b"banana", 4, 1, 2, keep_basic=True)
    for pattern in (b"ana", b"ban", b"axa", b"n", b"zzzz", b"nana"):
        expected = brute_kmismatch(b"banana", pattern, 2)
        assert query_short(index, pattern) == expected
        assert query_short_basic(index, pattern) == expected
    with pytest.raises(ValueError, match="length"):
        index.query(b"banan")


def test_short_index_reports_each_occurrence_once():
    """No position is produced twice before sorting."""
    text = random_text(40, 2, seed=4)
    index = ShortIndex(text, 6, 1, 2)
    for pattern in patterns_from(text, 20, (1, 6), 2, seed=5):
        index.query(pattern)
        assert all(count == 1 for count in index.last_multiplicity.values())


def test_short_index_retrieval_matches_grouped_tries():
    """Copies read back through the store equal the sorted group lists."""
    text = random_text(48, 2, seed=9)
    index = ShortIndex(text, 8, 1, 2, keep_basic=True)
    for (kappa, t), copies in index.grouped.items():
        for i, mf in enumerate(copies):
            got = index.store.retrieve(kappa, t, i)
            assert got.start == mf.start
            assert got.materialize(text) == mf.materialize(text)


def test_short_index_terminal_range_empty_query():
    """The empty prefix selects every stored copy."""
    index = ShortIndex(b"banana", 4, 1, 2)
    comparer = index.host.comparer(b"a")
    assert index.terminal_range((0, 1), comparer, ModifiedFragment(0, 0)) == (0, 6)


@pytest.mark.parametrize("sigma,h,k", [(2, 1, 2), (4, 1, 2), (2, 1, 3), (2, 2, 3)])
def test_short_index_matches_brute_force(sigma, h, k):
    """Grouped query, basic query and scan agree on random patterns."""
    text = random_text(36, sigma, seed=sigma + 3 * k + h)
    index = ShortIndex(text, 6, h, k, keep_basic=True)
    for pattern in patterns_from(text, 25, (1, 6), k, seed=h + k):
        expected = brute_kmismatch(text, pattern, k)
        assert index.query(pattern) == expected
        assert index.query_basic(pattern) == expected
