"""Tests for string primitives."""

import pytest

from kmix.strings import (
    PSI,
    ModifiedFragment,
    Run,
    Substitution,
    Text,
    compute_runs,
    hamming,
    lyndon_root,
    misper,
    smallest_period,
    tau_runs,
)


def test_hamming():
    """Positionwise mismatch counts."""
    assert hamming(b"abc", b"abc") == 0
    assert hamming(b"aba", b"ana") == 1
    assert hamming(b"ban", b"ana") == 3


def test_hamming_rejects_length_mismatch():
    """Strings of different lengths have no Hamming distance."""
    with pytest.raises(ValueError, match="equal lengths"):
        hamming(b"ab", b"abc")


def test_smallest_period():
    """Smallest periods of unary, bordered and border-free strings."""
    assert smallest_period(b"aaaa") == 1
    assert smallest_period(b"abaab") == 3
    assert smallest_period(b"abcd") == 4
    with pytest.raises(ValueError):
        smallest_period(b"")


def test_lyndon_root():
    """Start of the least rotation of the period string."""
    assert lyndon_root(b"ababab", 0, 2) == 0
    assert lyndon_root(b"bababa", 0, 2) == 1
    assert lyndon_root(b"aabaab", 0, 3) == 0


def test_lyndon_root_rejects_non_primitive_block():
    """A period string that is a power has no unique Lyndon root."""
    with pytest.raises(ValueError, match="not primitive"):
        lyndon_root(b"abababab", 0, 4)


def test_compute_runs():
    """Runs of small texts, sorted by start then period."""
    assert compute_runs(b"aaaa") == [Run(0, 3, 1, 0)]
    assert compute_runs(b"aabaab") == [Run(0, 1, 1, 0), Run(0, 5, 3, 0), Run(3, 4, 1, 0)]
    assert compute_runs(b"abcdef") == []


def test_compute_runs_lyndon_offset():
    """The Lyndon offset points at the least rotation of the period."""
    runs = compute_runs(b"cbababab")
    assert Run(1, 7, 2, 1) in runs


def test_tau_runs_filters_by_length_and_period():
    """Only long runs with period at most tau/3 survive."""
    assert tau_runs(compute_runs(b"aaaa"), 1) == []
    assert tau_runs(compute_runs(b"a" * 20), 3) == [Run(0, 19, 1, 0)]
    assert tau_runs([], 5) == []


def test_misper():
    """Closest positions breaking the period on each side."""
    assert misper(b"abababcbab", 2, 4, 2) == ([], [6])
    assert misper(b"aaaa", 0, 1, 3) == ([], [])
    assert misper(b"baab", 1, 2, 1) == ([0], [3])


def test_misper_limit_keeps_nearest():
    """With a limit, the misperiods closest to the period string are kept."""
    left, right = misper(b"xxaaaaxx", 2, 3, 1)
    assert left == [1]
    assert right == [6]


def test_misper_rejects_empty_period():
    """The period string must be non-empty."""
    with pytest.raises(ValueError, match="misper"):
        misper(b"abc", 2, 2)


def test_modified_fragment_materialize():
    """Substitutions are applied over the host bytes."""
    host = b"banana"
    dan = ModifiedFragment(0, 6, (Substitution(0, ord("d")),))
    assert dan.materialize_bytes(host) == b"danana"
    assert ModifiedFragment(1, 4).materialize_bytes(host) == b"ana"
    assert dan.char_at(host, 1) == ord("a")
    with pytest.raises(IndexError):
        dan.char_at(host, 6)


def test_modified_fragment_shift_and_truncate():
    """Dropping and keeping characters moves substitution offsets along."""
    host = b"banana"
    mf = ModifiedFragment(0, 6, (Substitution(1, PSI), Substitution(4, ord("x"))))
    assert mf.shift(2).materialize(host) == list(b"naxa")
    assert mf.truncate(3).materialize(host) == [ord("b"), PSI, ord("n")]


def test_set_char_restores_original():
    """Writing back the host byte removes the substitution."""
    host = b"banana"
    mf = ModifiedFragment(0, 6).set_char(host, 2, ord("x"))
    assert mf.subs == (Substitution(2, ord("x")),)
    assert mf.set_char(host, 2, ord("n")).subs == ()


def test_validate_rejects_noop_substitution():
    """A substitution writing the original byte is malformed."""
    with pytest.raises(ValueError, match="original byte"):
        ModifiedFragment(0, 6, (Substitution(0, ord("b")),)).validate(b"banana")


def test_text_rejects_empty():
    """Indexes need at least one byte of text."""
    with pytest.raises(ValueError, match="at least one byte"):
        Text(b"")
    assert Text(b"banana").alphabet_size == 3
