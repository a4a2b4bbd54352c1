"""Greedy partition of the token sequence into similarity spans.

``form_spans`` transcribes the anchor-comparison loop exactly: a span
opens at anchor t and extends through j while sim(row_t, row_j) > tau
(strictly); the first failure closes it and the failing index anchors the
next span.  ``form_spans_binned`` quantizes each score to a histogram
edge first, trading exactness near tau (within 2/bins) for cheap,
cache-friendly comparisons.  Both tile [0, n) with no gaps or overlaps.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from . import kernels
from .types import Span

DEFAULT_BINS = 256


def _check_tau(tau: float) -> None:
    if not -1.0 <= tau <= 1.0:
        raise ValueError("tau must lie in [-1, 1]")


def _to_matrix(fp) -> np.ndarray:
    arr = np.ascontiguousarray(fp, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError("fingerprint matrix must be 2-dimensional")
    return arr


def _build(fp: np.ndarray, tau: float, bins: int, chained: bool, cap: int) -> list[Span]:
    if fp.shape[0] == 0:
        return []
    norms = kernels.row_norms(fp)
    starts, ends = kernels.span_boundaries(fp, norms, tau, bins, chained, cap)
    means, _ = kernels.span_stats(fp, starts, ends)
    out = []
    for i in range(len(starts)):
        mean = means[i].copy()
        mean.setflags(write=False)
        out.append(Span(start=int(starts[i]), end=int(ends[i]), mean_fp=mean))
    return out


def form_spans(
    fp,
    tau: float,
    *,
    chained: bool = False,
    span_cap: Optional[int] = None,
) -> list[Span]:
    """Exact greedy span formation.

    ``chained=True`` switches the comparison target from the span anchor
    to the immediately preceding token (an alternative local-merging
    reading; not the default).
    """
    _check_tau(tau)
    if span_cap is not None and span_cap < 1:
        raise ValueError("span cap must be >= 1 when set")
    return _build(_to_matrix(fp), tau, 0, chained, span_cap or 0)


def form_spans_binned(
    fp,
    tau: float,
    bins: int = DEFAULT_BINS,
    *,
    chained: bool = False,
    span_cap: Optional[int] = None,
) -> list[Span]:
    """Histogram-quantized variant of :func:`form_spans`.

    Scores snap up to the nearest of the ``bins + 1`` uniform edges over
    [-1, 1] before the threshold test, so results can differ from the
    exact loop only where a true score lies within 2/bins of tau; when
    tau is itself an edge the output matches :func:`form_spans` exactly.
    """
    _check_tau(tau)
    if bins < 2:
        raise ValueError("bins must be >= 2")
    if span_cap is not None and span_cap < 1:
        raise ValueError("span cap must be >= 1 when set")
    return _build(_to_matrix(fp), tau, bins, chained, span_cap or 0)
