"""Binary index file format.

Layout, little-endian throughout:

    magic "KMIX" | version u16 | kind tag u16
    k, mu, h, gamma, tau, sigma, wildcard    7 x i32 (0 or -1 when unused)
    section count u16
    per section: name length u16 | name (utf-8) | payload length u64 | payload

Indexes are rebuilt from their stored text and parameters, so writing a loaded file
reproduces it byte for byte.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from kmix.core.errors import IndexFormatError

MAGIC = b"KMIX"
FORMAT_VERSION = 1

_HEADER = struct.Struct("<4sHH")
_PARAMS = struct.Struct("<7i")
_COUNT = struct.Struct("<H")
_NAME_LEN = struct.Struct("<H")
_PAYLOAD_LEN = struct.Struct("<Q")


@dataclass(frozen=True)
class IndexParams:
    k: int
    mu: int = 0
    h: int = 0
    gamma: int = 0
    tau: int = 0
    sigma: int = 0
    wildcard: int = -1

    def as_tuple(self) -> tuple[int, ...]:
        return (self.k, self.mu, self.h, self.gamma, self.tau, self.sigma, self.wildcard)


@dataclass
class IndexContainer:
    kind_tag: int
    params: IndexParams
    sections: dict[str, bytes] = field(default_factory=dict)

    def to_bytes(self) -> bytes:
        parts = [
            _HEADER.pack(MAGIC, FORMAT_VERSION, self.kind_tag),
            _PARAMS.pack(*self.params.as_tuple()),
            _COUNT.pack(len(self.sections)),
        ]
        for name, payload in self.sections.items():
            raw = name.encode("utf-8")
            parts.append(_NAME_LEN.pack(len(raw)))
            parts.append(raw)
            parts.append(_PAYLOAD_LEN.pack(len(payload)))
            parts.append(payload)
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, data: bytes) -> IndexContainer:
        reader = _Reader(data)
        magic, version, tag = reader.unpack(_HEADER)
        if magic != MAGIC:
            raise IndexFormatError(f"not an index file (magic {magic!r})")
        if version != FORMAT_VERSION:
            raise IndexFormatError(
                f"index format version {version} is not supported (expected {FORMAT_VERSION})"
            )
        params = IndexParams(*reader.unpack(_PARAMS))
        (count,) = reader.unpack(_COUNT)
        sections: dict[str, bytes] = {}
        for _ in range(count):
            (name_len,) = reader.unpack(_NAME_LEN)
            try:
                name = reader.take(name_len).decode("utf-8")
            except UnicodeDecodeError as exc:
                raise IndexFormatError("section name is not valid utf-8") from exc
            (size,) = reader.unpack(_PAYLOAD_LEN)
            if name in sections:
                raise IndexFormatError(f"duplicate section {name!r}")
            sections[name] = reader.take(size)
        if reader.remaining:
            raise IndexFormatError(f"{reader.remaining} trailing bytes after the last section")
        return cls(tag, params, sections)

    def section(self, name: str) -> bytes:
        if name not in self.sections:
            raise IndexFormatError(f"missing section {name!r}. Available: {list(self.sections)}")
        return self.sections[name]


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    @property
    def remaining(self) -> int:
        return len(self.data) - self.pos

    def take(self, size: int) -> bytes:
        if size > self.remaining:
            raise IndexFormatError(
                f"truncated index file: need {size} bytes at offset {self.pos}, "
                f"{self.remaining} left"
            )
        out = self.data[self.pos : self.pos + size]
        self.pos += size
        return out

    def unpack(self, layout: struct.Struct) -> tuple:
        return layout.unpack(self.take(layout.size))
