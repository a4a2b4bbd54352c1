"""Whitespace/punctuation pretokenizer and pre-tokenized input support.

Rules: runs of Unicode letters/digits form one token, every other
non-whitespace character is a token of its own, whitespace only separates.
Byte ranges index into the UTF-8 encoding of the source, so token surfaces
plus the skipped gaps always rebuild the source exactly.
"""

from __future__ import annotations

import re
from itertools import accumulate
from typing import Iterable

from .types import Token, TokenStream

# [^\W_]+ is "alphanumeric run" (\w minus underscore); lone underscores and
# all other non-space characters tokenize individually.
_TOKEN_RE = re.compile(r"[^\W_]+|[^\w\s]|_")

_ID_MASK = (1 << 63) - 1
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = (1 << 64) - 1


def surface_id(surface: str) -> int:
    """Stable non-negative hash id for a surface (no vocabulary needed)."""
    h = _FNV_OFFSET
    for b in surface.encode("utf-8"):
        h = ((h ^ b) * _FNV_PRIME) & _U64
    return h & _ID_MASK


def pretokenize(source: str) -> TokenStream:
    """Split text into a TokenStream; empty input yields an empty stream."""
    if source.isascii():
        byte_at = None
    else:
        # byte offset of each code point
        byte_at = list(accumulate((len(c.encode("utf-8")) for c in source), initial=0))
    tokens = []
    for m in _TOKEN_RE.finditer(source):
        surf = m.group(0)
        if byte_at is None:
            start, end = m.start(), m.end()
        else:
            start, end = byte_at[m.start()], byte_at[m.end()]
        tokens.append(Token(surface=surf, id=surface_id(surf), start=start, end=end))
    return TokenStream(tokens=tuple(tokens), source=source)


def stream_from_surfaces(surfaces: Iterable[str]) -> TokenStream:
    """Build a stream from already-tokenized surfaces.

    The synthetic source joins surfaces with single spaces, which keeps
    every TokenStream invariant (increasing byte ranges, lossless
    reassembly against that source).
    """
    toks = []
    parts = []
    pos = 0
    for surf in surfaces:
        if not surf:
            raise ValueError("token surfaces must be non-empty")
        if parts:
            pos += 1  # the joining space
        nbytes = len(surf.encode("utf-8"))
        toks.append(Token(surface=surf, id=surface_id(surf), start=pos, end=pos + nbytes))
        parts.append(surf)
        pos += nbytes
    return TokenStream(tokens=tuple(toks), source=" ".join(parts))


def read_pretokenized(text: str) -> TokenStream:
    """Parse the one-token-per-line format; a blank line terminates."""
    surfaces = []
    for line in text.splitlines():
        if line == "":
            break
        surfaces.append(line)
    return stream_from_surfaces(surfaces)


def reassemble(stream: TokenStream) -> str:
    """Rebuild the source from token surfaces plus inter-token gaps."""
    src = stream.source.encode("utf-8")
    out = bytearray()
    pos = 0
    for tok in stream.tokens:
        out += src[pos : tok.start]
        out += tok.surface.encode("utf-8")
        pos = tok.end
    out += src[pos:]
    return out.decode("utf-8")
