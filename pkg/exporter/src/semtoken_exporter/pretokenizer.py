"""Pretokenization rules, re-specified byte-compatibly with the core.

The core CLI splits text into tokens as follows, and this module must
produce the identical token sequence for any input (the test suite
cross-checks against the installed ``semtoken`` CLI):

* runs of Unicode letters/digits (``isalnum``) form one token;
* every other non-whitespace character, underscore included, is a
  single-character token;
* whitespace separates tokens and is never part of one.

Offsets here are tracked in characters (the encoder tokenizer reports
character offsets); byte offsets are not needed for SEMF export.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_TOKEN_RE = re.compile(r"[^\W_]+|[^\w\s]|_")


@dataclass(frozen=True)
class CoreToken:
    surface: str
    start: int  # character offset, inclusive
    end: int    # character offset, exclusive


def pretokenize(text: str) -> list[CoreToken]:
    return [
        CoreToken(surface=m.group(0), start=m.start(), end=m.end())
        for m in _TOKEN_RE.finditer(text)
    ]
