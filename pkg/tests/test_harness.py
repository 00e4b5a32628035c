"""Tests for oracles, parameter selection, the file container, the registry and selftest."""

from dataclasses import replace

import pytest
from fixtures import BANANA, patterns_from, random_text

from kmix.core.errors import IndexFormatError
from kmix.harness import registry
from kmix.harness.autotune import COMPACT_ONLY, SPLIT, AutoIndex, AutoParams, auto_params
from kmix.harness.container import FORMAT_VERSION, MAGIC, IndexContainer, IndexParams
from kmix.harness.oracles import brute_kmismatch, brute_wildcard
from kmix.harness.registry import IndexKind, build_index, get_kind, list_kinds, load_index
from kmix.harness.selftest import doubling, minimize_pattern, run_selftest, space_report


def test_brute_kmismatch():
    """Hamming-distance scan on small inputs."""
    assert brute_kmismatch(BANANA, b"aba", 1) == [1, 3]
    assert brute_kmismatch(BANANA, b"aba", 0) == []
    assert brute_kmismatch(BANANA, b"", 1) == list(range(7))
    assert brute_kmismatch(BANANA, b"bananas", 6) == []


def test_brute_wildcard():
    """The wildcard byte matches anything."""
    wild = ord("?")
    assert brute_wildcard(BANANA, b"b?n", wild) == [0]
    assert brute_wildcard(BANANA, b"???", wild) == [0, 1, 2, 3]
    assert brute_wildcard(BANANA, b"n*", ord("*")) == [2, 4]
    assert brute_wildcard(BANANA, b"", wild) == list(range(7))


def test_auto_params_even_k():
    """n = 2^20, k = 2 gives mu = floor(20^1.5), h = 1 and gamma = mu // 3."""
    params = auto_params(2**20, 2, 4)
    assert params == AutoParams(SPLIT, 89, 1, 29)
    assert not params.compact_only


def test_auto_params_odd_k():
    """Odd k uses h = (k-1)/2 and a slightly smaller exponent."""
    params = auto_params(2**20, 3, 4)
    assert params.h == 1
    assert params.gamma == params.mu // 4
    assert params.mu < auto_params(2**20, 2, 4).mu


def test_auto_params_special_cases():
    """k = 1 is compact-only; tiny texts clamp gamma to 2; invalid inputs raise."""
    assert auto_params(1000, 1, 2).mode == COMPACT_ONLY
    assert auto_params(4, 2, 2) == AutoParams(SPLIT, 2, 1, 2)
    with pytest.raises(ValueError, match="n must be positive"):
        auto_params(0, 2, 2)
    with pytest.raises(ValueError, match="sigma"):
        auto_params(10, 2, 0)
    with pytest.raises(ValueError, match="k must be"):
        auto_params(10, 0, 2)


def test_auto_index_routing():
    """Short patterns go to the short index, long ones to the long index, the rest to compact."""
    text = random_text(120, 2, seed=21)
    index = AutoIndex(text, 2, AutoParams(SPLIT, mu=8, h=1, gamma=4))
    assert index.route(5) == "short"
    assert index.route(10) == "compact"
    assert index.route(12) == "long"
    for pattern in patterns_from(text, 45, (1, 20), 2, seed=22):
        assert index.query(pattern) == brute_kmismatch(text, pattern, 2)
    assert index.stats()["params"]["gamma"] == 4


def test_auto_index_compact_only():
    """k = 1 builds neither the short nor the long index."""
    index = AutoIndex(random_text(50, 2, seed=23), 1)
    assert index.short is None
    assert index.long is None
    assert index.route(3) == "compact"


def test_container_round_trip():
    """Serialized containers parse back to the same value and the same bytes."""
    container = IndexContainer(3, IndexParams(2, mu=5, h=1, sigma=3), {"text": BANANA})
    data = container.to_bytes()
    assert data.startswith(MAGIC)
    parsed = IndexContainer.from_bytes(data)
    assert parsed == container
    assert parsed.to_bytes() == data


def test_container_rejects_malformed_input():
    """Wrong magic, unknown version, truncation and trailing bytes all raise."""
    data = IndexContainer(2, IndexParams(1), {"text": BANANA}).to_bytes()
    with pytest.raises(IndexFormatError, match="magic"):
        IndexContainer.from_bytes(b"XXXX" + data[4:])
    bumped = data[:4] + (FORMAT_VERSION + 1).to_bytes(2, "little") + data[6:]
    with pytest.raises(IndexFormatError, match="version"):
        IndexContainer.from_bytes(bumped)
    with pytest.raises(IndexFormatError, match="truncated"):
        IndexContainer.from_bytes(data[:-1])
    with pytest.raises(IndexFormatError, match="truncated"):
        IndexContainer.from_bytes(data[:3])
    with pytest.raises(IndexFormatError, match="trailing"):
        IndexContainer.from_bytes(data + b"\x00")
    with pytest.raises(IndexFormatError, match="missing section"):
        IndexContainer(2, IndexParams(1)).section("text")


def test_list_kinds():
    """Every shipped kind is registered and the list is sorted."""
    kinds = list_kinds()
    assert {"auto", "compact", "errata", "long", "short", "wild"} <= set(kinds)
    assert kinds == sorted(kinds)


def test_get_kind_unknown():
    """Unknown names list what is available."""
    with pytest.raises(ValueError, match="Unknown index kind: nope. Available"):
        get_kind("nope")


def test_register_kind(monkeypatch):
    """A registered kind is buildable by name; registering twice keeps the first."""
    list_kinds()
    monkeypatch.setattr(registry, "_KINDS", dict(registry._KINDS))
    kind = IndexKind(
        name="scan",
        tag=99,
        build=lambda text, p: (text, p.k),
        query=lambda index, pattern: brute_kmismatch(index[0], pattern, index[1]),
        stats=lambda index: {},
    )
    registry.register_kind(kind)
    registry.register_kind(replace(kind, tag=100))
    assert get_kind("scan").tag == 99
    assert "scan" in list_kinds()
    built = build_index("scan", BANANA, IndexParams(1))
    assert built.query(b"aba") == [1, 3]
    assert built.params.sigma == 3


KIND_CASES = {
    "errata": (IndexParams(2), (1, 12)),
    "compact": (IndexParams(2), (1, 12)),
    "short": (IndexParams(2, mu=8, h=1), (1, 8)),
    "long": (IndexParams(2, gamma=4), (12, 20)),
    "wild": (IndexParams(2), (1, 12)),
    "auto": (IndexParams(2), (1, 20)),
}


@pytest.mark.parametrize("name", sorted(KIND_CASES))
def test_build_and_load_every_kind(name):
    """Loading a written index reproduces its bytes, parameters and answers."""
    text = random_text(60, 2, seed=24)
    params, lengths = KIND_CASES[name]
    built = build_index(name, text, params)
    data = built.to_bytes()
    loaded = load_index(data)
    assert loaded.kind.name == name
    assert loaded.params == built.params
    assert loaded.to_bytes() == data
    patterns = patterns_from(text, 15, lengths, 2, seed=25)
    if name == "wild":
        patterns = [b"?" + p[1:] for p in patterns]
        for pattern in patterns:
            assert loaded.query(pattern) == brute_wildcard(text, pattern, ord("?"))
    else:
        for pattern in patterns:
            assert loaded.query(pattern) == brute_kmismatch(text, pattern, 2)
    assert loaded.query(b"") == list(range(61))
    assert loaded.query(text + b"a") == []


def test_resolved_parameters():
    """Kinds fill in parameters derived from the text."""
    text = random_text(60, 2, seed=26)
    assert build_index("long", text, IndexParams(2, gamma=6)).params.tau == 2
    assert build_index("wild", text, IndexParams(1)).params.wildcard == ord("?")
    auto = build_index("auto", text, IndexParams(2)).params
    assert (auto.mu, auto.h, auto.gamma) == (14, 1, 4)


def test_load_index_rejects_inconsistent_files():
    """Unknown tags, a wrong sigma and unbuildable parameters are format errors."""
    with pytest.raises(IndexFormatError, match="tag"):
        load_index(IndexContainer(99, IndexParams(1), {"text": BANANA}).to_bytes())
    with pytest.raises(IndexFormatError, match="sigma"):
        load_index(IndexContainer(2, IndexParams(1, sigma=7), {"text": BANANA}).to_bytes())
    bad_long = IndexContainer(4, IndexParams(1, gamma=50, sigma=3), {"text": BANANA})
    with pytest.raises(IndexFormatError, match="do not build a long index"):
        load_index(bad_long.to_bytes())
    with pytest.raises(IndexFormatError, match="missing section"):
        load_index(IndexContainer(2, IndexParams(1, sigma=3)).to_bytes())


def test_minimize_pattern():
    """Deletions shrink a failing pattern to a minimal one."""
    assert minimize_pattern(b"xxaxx", lambda p: b"a" in p) == b"a"
    assert minimize_pattern(b"abc", lambda p: len(p) == 3) == b"abc"


def test_doubling():
    """Sizes double from start while they stay within stop."""
    assert doubling(3, 20) == [3, 6, 12]
    assert doubling(64, 64) == [64]


def test_space_report_columns():
    """The space frame carries measured counts, models and growth rates."""
    frame = space_report([32, 64], 2, 2, 0)
    assert list(frame["n"]) == [32, 64]
    assert {"terminals", "model", "ratio", "growth", "model_growth"} <= set(frame.columns)
    assert (frame["terminals"] > 0).all()
    assert frame["growth"].isna().iloc[0]


def test_selftest_passes():
    """Every kind agrees with the oracles on a small random text."""
    report = run_selftest(60, 2, 2, seed=1, patterns=10)
    assert report.ok
    assert list(report.summary["kind"]) == ["errata", "compact", "wild", "short", "long"]
    assert (report.summary["mismatches"] == 0).all()
    assert report.space is None


def test_selftest_space_suite():
    """The space suite runs without the oracle comparison."""
    report = run_selftest(100, 2, 2, seed=0, suite="space")
    assert report.ok
    assert list(report.space["n"]) == [64]


def test_selftest_reports_minimized_counterexamples(monkeypatch):
    """A kind that answers wrongly shows up with a one-byte counterexample."""
    list_kinds()
    broken = replace(get_kind("compact"), query=lambda index, pattern: [])
    monkeypatch.setitem(registry._KINDS, "compact", broken)
    report = run_selftest(40, 2, 1, seed=3, patterns=6)
    assert not report.ok
    compact = [f for f in report.failures if f.kind == "compact"]
    assert compact
    assert all(len(f.minimized) == 1 for f in compact)
    assert "minimized=" in compact[0].describe()


def test_selftest_rejects_bad_arguments():
    """Unknown suites and degenerate sizes raise."""
    with pytest.raises(ValueError, match="Unknown suite"):
        run_selftest(50, 2, 2, 0, suite="nope")
    with pytest.raises(ValueError, match="n >= 2"):
        run_selftest(1, 2, 2, 0)
