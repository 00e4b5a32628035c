"""The index kinds shipped with the package, as registry entries."""

from __future__ import annotations

from dataclasses import replace
from typing import Any

from kmix.compact_index import CompactIndex, WildcardIndex
from kmix.core.config import settings
from kmix.errata import ErrataTree, build_errata, errata_query
from kmix.harness.autotune import COMPACT_ONLY, SPLIT, AutoIndex, AutoParams, auto_params
from kmix.harness.container import IndexParams
from kmix.harness.registry import IndexKind
from kmix.long import LongIndex
from kmix.short_index import ShortIndex
from kmix.trie.text_lcp import ilog2


def _auto(text: bytes, params: IndexParams) -> AutoParams:
    return auto_params(len(text), max(params.k, 1), max(1, len(set(text))))


def _resolve_short(text: bytes, params: IndexParams) -> IndexParams:
    if params.mu and params.h:
        return params
    auto = _auto(text, params)
    mu = params.mu or auto.mu or min(len(text), 16)
    h = params.h or auto.h or 1
    return replace(params, mu=mu, h=h)


def _resolve_long(text: bytes, params: IndexParams) -> IndexParams:
    gamma = params.gamma
    if not gamma:
        auto = _auto(text, params)
        gamma = auto.gamma or max(2, ilog2(max(len(text), 2)))
        gamma = min(gamma, len(text) // (params.k + 1))
    return replace(params, gamma=gamma, tau=max(1, gamma // 3))


def _resolve_wild(text: bytes, params: IndexParams) -> IndexParams:
    if params.wildcard >= 0:
        return params
    return replace(params, wildcard=settings.wildcard_byte)


def _resolve_auto(text: bytes, params: IndexParams) -> IndexParams:
    if params.mu or params.gamma:
        return params
    auto = _auto(text, params)
    return replace(params, mu=auto.mu, h=auto.h, gamma=auto.gamma, tau=max(0, auto.gamma // 3))


def _errata_stats(tree: ErrataTree) -> dict[str, Any]:
    return {
        "tries": len(tree.tries),
        "terminals": tree.terminal_count(),
        "nodes": sum(et.trie.size for et in tree.tries),
    }


def _build_auto(text: bytes, params: IndexParams) -> AutoIndex:
    mode = COMPACT_ONLY if not params.mu else SPLIT
    return AutoIndex(text, params.k, AutoParams(mode, params.mu, params.h, params.gamma))


KINDS = [
    IndexKind(
        name="errata",
        tag=1,
        build=lambda text, p: build_errata(text, p.k),
        query=errata_query,
        stats=_errata_stats,
    ),
    IndexKind(
        name="compact",
        tag=2,
        build=lambda text, p: CompactIndex(text, p.k),
        query=lambda index, pattern: index.query(pattern),
        stats=lambda index: index.stats(),
    ),
    IndexKind(
        name="short",
        tag=3,
        build=lambda text, p: ShortIndex(text, p.mu, p.h, p.k),
        query=lambda index, pattern: index.query(pattern),
        stats=lambda index: index.stats(),
        resolve=_resolve_short,
    ),
    IndexKind(
        name="long",
        tag=4,
        build=lambda text, p: LongIndex(text, p.gamma, p.k),
        query=lambda index, pattern: index.query(pattern),
        stats=lambda index: index.stats(),
        resolve=_resolve_long,
    ),
    IndexKind(
        name="wild",
        tag=5,
        build=lambda text, p: WildcardIndex(text, p.k, p.wildcard),
        query=lambda index, pattern: index.query(pattern),
        stats=lambda index: index.stats(),
        resolve=_resolve_wild,
    ),
    IndexKind(
        name="auto",
        tag=6,
        build=_build_auto,
        query=lambda index, pattern: index.query(pattern),
        stats=lambda index: index.stats(),
        resolve=_resolve_auto,
    ),
]
