"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; the pure
Python module is the fallback.  ``SEMTOKEN_BACKEND=pure`` or ``=native``
forces a backend (forcing ``native`` re-raises its import error instead
of silently degrading).  Both backends return bit-identical results; the
choice only affects speed.
"""

from __future__ import annotations

import os

from . import pure

_requested = os.environ.get("SEMTOKEN_BACKEND", "").strip().lower()

if _requested not in ("", "pure", "native"):
    raise RuntimeError(
        f"SEMTOKEN_BACKEND must be 'pure' or 'native', not {_requested!r}"
    )

if _requested == "pure":
    _impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]

        BACKEND = "native"
    except ImportError:
        if _requested == "native":
            raise
        _impl = pure
        BACKEND = "pure"

surface_features = _impl.surface_features
embed_rows = _impl.embed_rows
row_norms = _impl.row_norms
span_boundaries = _impl.span_boundaries
span_stats = _impl.span_stats

__all__ = [
    "BACKEND",
    "embed_rows",
    "pure",
    "row_norms",
    "span_boundaries",
    "span_stats",
    "surface_features",
]
