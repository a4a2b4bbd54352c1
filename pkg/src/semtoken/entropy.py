"""Span entropy scoring and fine/coarse granularity assignment.

A span's entropy is the trace of the population covariance of its member
fingerprints: the summed per-dimension variance, dividing by the member
count m (not m-1) so singletons are well-defined at exactly 0.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Sequence

import numpy as np

from . import kernels
from .types import Absolute, DeltaPolicy, Granularity, Percentile, Span


def span_entropy(rows) -> float:
    """Trace of the population covariance of the given fingerprint rows.

    Exactly 0 for a single row or identical rows; grows with the spread
    of the members.  Raises ValueError on an empty input.
    """
    arr = np.ascontiguousarray(rows, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError("expected a 2-dimensional array of member rows")
    m = arr.shape[0]
    if m == 0:
        raise ValueError("span entropy requires at least one row")
    starts = np.array([0], dtype=np.int64)
    ends = np.array([m], dtype=np.int64)
    _, ents = kernels.span_stats(arr, starts, ends)
    return float(ents[0])


def score_spans(fp, spans: Sequence[Span]) -> list[Span]:
    """Return spans with entropy (and mean fingerprint) filled in."""
    if not spans:
        return []
    arr = np.ascontiguousarray(fp, dtype=np.float64)
    starts = np.array([s.start for s in spans], dtype=np.int64)
    ends = np.array([s.end for s in spans], dtype=np.int64)
    means, ents = kernels.span_stats(arr, starts, ends)
    out = []
    for i, sp in enumerate(spans):
        mean = means[i].copy()
        mean.setflags(write=False)
        out.append(replace(sp, mean_fp=mean, entropy=float(ents[i])))
    return out


def assign_granularity(entropy: float, delta: float) -> Granularity:
    """Fine iff entropy strictly exceeds delta."""
    return Granularity.FINE if entropy > delta else Granularity.COARSE


def resolve_delta(policy: DeltaPolicy, entropies: Sequence[float]) -> float:
    """Turn a delta policy into a concrete threshold.

    Percentile policies interpolate linearly between order statistics of
    the given entropy list and therefore require it to be non-empty.
    """
    if isinstance(policy, Absolute):
        return float(policy.value)
    if isinstance(policy, Percentile):
        if len(entropies) == 0:
            raise ValueError("percentile delta needs a non-empty entropy list")
        return float(np.percentile(np.asarray(entropies, dtype=np.float64), policy.p))
    raise TypeError(f"unknown delta policy: {policy!r}")
