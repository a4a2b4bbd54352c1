"""Query-conditioned span importance and filtering.

Importance of a span for a query is the cosine between the query
fingerprint and the span's mean fingerprint.  The query fingerprint is
the mean-pooled embedding of the query text under the same embedder the
document used; a model-internal query vector would be the ideal input,
this is its closest external stand-in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .embedder import BuiltinEmbedder, cosine_sim
from .errors import AlignmentError
from .types import Span


@dataclass(frozen=True)
class QuerySpec:
    """A query text plus the importance threshold spans must meet."""

    text: str
    threshold: float = 0.0

    def __post_init__(self) -> None:
        if not -1.0 <= self.threshold <= 1.0:
            raise ValueError("query threshold must lie in [-1, 1]")


@dataclass(frozen=True)
class ScoredSpan:
    span: Span
    importance: float


def query_fingerprint(embedder: BuiltinEmbedder, text: str) -> np.ndarray:
    """Mean-pool the token fingerprints of the query text."""
    fp = embedder.embed_text(text)
    if fp.shape[0] == 0:
        raise ValueError("query text contains no tokens")
    starts = np.array([0], dtype=np.int64)
    ends = np.array([fp.shape[0]], dtype=np.int64)
    means, _ = kernels.span_stats(fp, starts, ends)
    return means[0]


def span_importance(query_fp, span: Span) -> float:
    """Cosine between the query fingerprint and the span mean, in [-1, 1]."""
    if span.mean_fp is None:
        raise ValueError("span has no mean fingerprint; score spans first")
    qv = np.asarray(query_fp, dtype=np.float64)
    if qv.shape != span.mean_fp.shape:
        raise AlignmentError(
            f"query dimension {qv.shape} does not match span dimension "
            f"{span.mean_fp.shape}"
        )
    return cosine_sim(qv, span.mean_fp)


def filter_spans(
    spans: Sequence[Span], query_fp, threshold: float
) -> list[ScoredSpan]:
    """Keep spans whose importance is >= threshold, in original order."""
    if not -1.0 <= threshold <= 1.0:
        raise ValueError("query threshold must lie in [-1, 1]")
    out = []
    for sp in spans:
        s = span_importance(query_fp, sp)
        if s >= threshold:
            out.append(ScoredSpan(span=sp, importance=s))
    return out
