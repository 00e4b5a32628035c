"""Registry of index kinds."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, replace
from typing import Any

from kmix.core.config import settings
from kmix.core.errors import IndexFormatError
from kmix.harness.container import IndexContainer, IndexParams
from kmix.strings import Text

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IndexKind:
    name: str
    tag: int
    build: Callable[[bytes, IndexParams], Any]
    query: Callable[[Any, bytes], list[int]]
    stats: Callable[[Any], dict[str, Any]]
    # fills in parameters derived from the text, e.g. automatic mu, h and gamma
    resolve: Callable[[bytes, IndexParams], IndexParams] = lambda text, params: params


_KINDS: dict[str, IndexKind] = {}
_initialized = False


def register_kind(kind: IndexKind) -> None:
    """Register an index kind (idempotent)."""
    if kind.name in _KINDS:
        return
    _KINDS[kind.name] = kind


def _init_kinds() -> None:
    """Lazy initialization - the builtin kinds import every index module."""
    global _initialized
    if _initialized:
        return
    _initialized = True
    from kmix.harness import builtin_kinds

    for kind in builtin_kinds.KINDS:
        register_kind(kind)


def list_kinds() -> list[str]:
    """Get list of available index kind names."""
    _init_kinds()
    return sorted(_KINDS.keys())


def get_kind(name: str) -> IndexKind:
    """Get an index kind by name."""
    _init_kinds()
    if name not in _KINDS:
        raise ValueError(f"Unknown index kind: {name}. Available: {list_kinds()}")
    return _KINDS[name]


def get_kind_by_tag(tag: int) -> IndexKind:
    _init_kinds()
    for kind in _KINDS.values():
        if kind.tag == tag:
            return kind
    raise IndexFormatError(f"Unknown index kind tag: {tag}. Available: {list_kinds()}")


@dataclass
class BuiltIndex:
    """An index of some kind together with what it was built from."""

    kind: IndexKind
    params: IndexParams
    text: bytes
    index: Any

    def query(self, pattern: bytes) -> list[int]:
        n, m = len(self.text), len(pattern)
        if m == 0:
            return list(range(n + 1))
        if m > n:
            return []
        return self.kind.query(self.index, pattern)

    def stats(self) -> dict[str, Any]:
        return {"kind": self.kind.name, "n": len(self.text), **self.kind.stats(self.index)}

    def to_container(self) -> IndexContainer:
        return IndexContainer(self.kind.tag, self.params, {"text": self.text})

    def to_bytes(self) -> bytes:
        return self.to_container().to_bytes()


def build_index(kind_name: str, text: bytes, params: IndexParams) -> BuiltIndex:
    kind = get_kind(kind_name)
    Text(text)  # length limits
    params = kind.resolve(text, replace(params, sigma=len(set(text))))
    index = kind.build(text, params)
    logger.info("built %s index over %d bytes", kind.name, len(text))
    return BuiltIndex(kind, params, text, index)


def load_index(data: bytes) -> BuiltIndex:
    """Rebuild an index from the bytes written by BuiltIndex.to_bytes."""
    container = IndexContainer.from_bytes(data)
    kind = get_kind_by_tag(container.kind_tag)
    text = container.section("text")
    if len(text) > settings.MAX_TEXT_LEN:
        raise IndexFormatError(f"stored text of {len(text)} bytes exceeds MAX_TEXT_LEN")
    params = container.params
    if params.sigma != len(set(text)):
        raise IndexFormatError(
            f"parameter block says sigma={params.sigma}, text has {len(set(text))} symbols"
        )
    try:
        index = kind.build(text, params)
    except ValueError as exc:
        raise IndexFormatError(
            f"stored parameters do not build a {kind.name} index: {exc}"
        ) from exc
    return BuiltIndex(kind, params, text, index)
