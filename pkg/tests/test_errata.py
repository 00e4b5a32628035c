"""Tests for k-errata trees."""

import pytest
from fixtures import patterns_from, random_text

from kmix.errata import ErrataTree, SplitTree, build_errata, errata_query
from kmix.harness.oracles import brute_kmismatch, brute_wildcard
from kmix.trie.suffix_tree import SuffixTreeIndex


def test_split_tree_cover_tiles_range():
    """Cover nodes partition the requested item range."""
    split = SplitTree([5, 1, 1, 8, 2, 3, 1])
    for a in range(8):
        for b in range(a, 8):
            items = []
            for v in split.cover(a, b):
                items.extend(range(split.lo[v], split.hi[v]))
            assert sorted(items) == list(range(a, b))


def test_split_tree_heavy_item_sits_high():
    """A dominant item is reached in few steps."""
    split = SplitTree([1, 100, 1])
    assert len(split.chain(1)) <= 3
    with pytest.raises(ValueError):
        SplitTree([])


def test_errata_k0_is_sparse_suffix_tree(banana_host):
    """k = 0 keeps only level 0."""
    tree = ErrataTree(banana_host, list(range(6)), 0)
    assert len(tree.tries) == 1
    assert tree.terminal_count() == 6
    assert set(tree.label_multiplicity_stats().values()) == {1}


def test_errata_single_suffix_has_no_substitution_trees(banana_host):
    """One suffix is one path with nothing off it."""
    tree = ErrataTree(banana_host, [2], 3)
    assert len(tree.tries) == 1
    assert tree.label_multiplicity_stats() == {2: 1}


def test_errata_rejects_bad_positions(banana_host):
    """Empty, duplicate and out-of-range suffix sets are refused."""
    with pytest.raises(ValueError, match="at least one suffix"):
        ErrataTree(banana_host, [], 1)
    with pytest.raises(ValueError, match="distinct"):
        ErrataTree(banana_host, [1, 1], 1)
    with pytest.raises(ValueError, match="outside"):
        ErrataTree(banana_host, [7], 1)


def test_errata_query_banana(banana_host):
    """One mismatch against 'aba' and 'ana'."""
    tree = ErrataTree(banana_host, list(range(6)), 1)
    assert tree.query_pattern(b"aba", 1).labels == [1, 3]
    assert tree.query_pattern(b"ana", 1).labels == [1, 3]
    assert tree.query_pattern(b"ana", 0).labels == [1, 3]
    assert tree.query_pattern(b"bxnxna", 1).labels == []


def test_errata_budget_zero_is_exact_search():
    """With no budget only exact occurrences come back."""
    text = random_text(120, 3, seed=1)
    host = SuffixTreeIndex(text)
    tree = ErrataTree(host, list(range(len(text))), 2)
    for pattern in patterns_from(text, 30, (1, 8), 0, seed=2):
        assert tree.query_pattern(pattern, 0).labels == brute_kmismatch(text, pattern, 0)


@pytest.mark.parametrize("sigma,k", [(2, 1), (4, 1), (2, 2), (4, 2), (3, 3)])
def test_errata_matches_brute_force(sigma, k):
    """All suffixes indexed: the answer is every k-mismatch occurrence."""
    text = random_text(100, sigma, seed=sigma * 10 + k)
    host = SuffixTreeIndex(text)
    tree = ErrataTree(host, list(range(len(text))), k)
    for pattern in patterns_from(text, 40, (1, 4 * k + 6), k, seed=k):
        assert tree.query_pattern(pattern, k).labels == brute_kmismatch(text, pattern, k)


def test_errata_sparse_suffix_set():
    """Only indexed suffixes are reported."""
    text = random_text(90, 2, seed=5)
    host = SuffixTreeIndex(text)
    positions = list(range(0, 90, 3)) + [90]
    tree = ErrataTree(host, positions, 2)
    for pattern in patterns_from(text, 30, (2, 10), 2, seed=6):
        expected = [j for j in brute_kmismatch(text, pattern, 2) if j in set(positions)]
        assert tree.query_pattern(pattern, 2).labels == expected


def test_errata_labels_appear_once_per_trie():
    """Every trie holds a label at most once; multiplicities stay small."""
    text = random_text(128, 2, seed=8)
    tree = ErrataTree(SuffixTreeIndex(text), list(range(len(text))), 2)
    counts = tree.label_multiplicity_stats()
    assert sorted(counts) == list(range(len(text)))
    assert max(counts.values()) >= 1


def test_errata_wildcard_variant():
    """Wildcard bytes in the pattern are substituted for free, others never."""
    text = b"banana"
    host = SuffixTreeIndex(text)
    tree = ErrataTree(host, list(range(6)), 2, wildcard=True)
    wild = ord("?")
    for pattern in (b"b?n", b"?a?a", b"an?", b"??", b"n?x"):
        result = tree.query(host.comparer(pattern), 0, 0, wildcard_byte=wild)
        assert result.labels == brute_wildcard(text, pattern, wild)
    with pytest.raises(ValueError, match="wildcard"):
        tree.query(host.comparer(b"ana"), 0, 0)


def test_build_errata_and_query_helpers():
    """Module helpers build over all or some suffixes and default the budget to k."""
    tree = build_errata(b"banana", 1)
    assert errata_query(tree, b"aba") == [1, 3]
    assert errata_query(tree, b"aba", 0) == []
    sparse = build_errata(b"banana", 1, [1, 5])
    assert errata_query(sparse, b"aba") == [1]


def test_errata_answers_grow_with_budget():
    """Raising the budget never drops an occurrence."""
    text = random_text(96, 3, seed=12)
    tree = ErrataTree(SuffixTreeIndex(text), list(range(len(text))), 3)
    for pattern in patterns_from(text, 25, (2, 12), 3, seed=13):
        answers = [set(tree.query_pattern(pattern, b).labels) for b in range(4)]
        for smaller, larger in zip(answers, answers[1:], strict=False):
            assert smaller <= larger


def test_errata_budget_error_names_upper_bound(banana_host):
    """A budget past k is rejected with the real bound in the message."""
    tree = ErrataTree(banana_host, list(range(6)), 1)
    with pytest.raises(ValueError, match=r"outside \[0\.\.1\]"):
        tree.query_pattern(b"ana", 2)
    with pytest.raises(ValueError, match=r"outside \[0\.\.1\]"):
        tree.query_pattern(b"ana", -1)
