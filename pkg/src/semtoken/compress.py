"""End-to-end compression pipeline and lossless decode.

Pipeline: embed -> form spans -> score entropy -> (optional query filter)
-> allocate granularity -> emit units with offset metadata.

Granularity allocation reconciles three behaviors into one policy:

* no budget: a span is fine iff its entropy strictly exceeds delta,
  otherwise it merges into one coarse unit (pure threshold mode);
* budget B: fine status is a prize awarded in entropy rank order while
  the running emitted-token total still fits (a fine span costs its
  width, coarse costs 1); spans that no longer fit fall back to coarse;
* if even all-coarse overflows B, the lowest-entropy spans are dropped
  until the total fits.  Dropping is strictly a last resort.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .embedder import EmbeddingProvider
from .entropy import assign_granularity, resolve_delta, score_spans
from .errors import AlignmentError, CorruptionError
from .query import QuerySpec, ScoredSpan, filter_spans, query_fingerprint
from .spans import form_spans, form_spans_binned
from .types import (
    Absolute,
    CoarseSurface,
    CompressedSequence,
    CompressionConfig,
    Granularity,
    Percentile,
    SequenceMeta,
    Span,
    TokenStream,
    Unit,
)


def select_top_b(spans: Sequence[Span], b: int) -> list[Span]:
    """The b highest-entropy spans (ties to the smaller start), in
    positional order.  Greedy selection is exact here because the
    objective (sum of retained entropies) is separable."""
    if b < 0:
        raise ValueError("budget count must be >= 0")
    ranked = sorted(spans, key=lambda s: (-s.entropy, s.start))
    chosen = ranked[:b]
    return sorted(chosen, key=lambda s: s.start)


def _allocate_threshold(spans: list[Span], delta: float) -> list[Span]:
    return [replace(sp, granularity=assign_granularity(sp.entropy, delta)) for sp in spans]


def _allocate_budget(spans: list[Span], budget: int) -> list[Span]:
    order = sorted(range(len(spans)), key=lambda i: (-spans[i].entropy, spans[i].start))
    grain: dict[int, Granularity] = {}
    total = 0
    for i in order:
        w = spans[i].width
        if total + w <= budget:
            grain[i] = Granularity.FINE
            total += w
        else:
            grain[i] = Granularity.COARSE
            total += 1
    if total > budget:
        drop_order = sorted(
            range(len(spans)), key=lambda i: (spans[i].entropy, -spans[i].start)
        )
        for i in drop_order:
            if total <= budget:
                break
            total -= spans[i].width if grain[i] is Granularity.FINE else 1
            grain[i] = Granularity.DROPPED
    return [replace(sp, granularity=grain[i]) for i, sp in enumerate(spans)]


def _coarse_surface(stream: TokenStream, span: Span, policy: CoarseSurface) -> str:
    if policy is CoarseSurface.FIRST_TOKEN:
        return stream[span.start].surface
    return " ".join(stream[i].surface for i in range(span.start, span.end))


@dataclass(frozen=True)
class PipelineResult:
    """Compression output plus the intermediates reports are built from."""

    sequence: CompressedSequence
    spans: tuple[Span, ...]  # final granularity, positional order
    delta: Optional[float]
    query_scores: Optional[tuple[ScoredSpan, ...]]


def compress_details(
    stream: TokenStream,
    provider: EmbeddingProvider,
    cfg: CompressionConfig,
    *,
    query: Optional[QuerySpec] = None,
) -> PipelineResult:
    """Run the full pipeline, keeping the per-span detail a report needs."""
    n = len(stream)
    snapshot = _config_snapshot(cfg, provider)
    if n == 0:
        meta = SequenceMeta(n=0, r=1.0, config=snapshot)
        return PipelineResult(
            sequence=CompressedSequence(units=(), meta=meta),
            spans=(),
            delta=None,
            query_scores=None,
        )

    fp = provider.fingerprints(stream)
    if cfg.histogram_bins is not None:
        spans = form_spans_binned(
            fp, cfg.tau, cfg.histogram_bins, span_cap=cfg.span_cap
        )
    else:
        spans = form_spans(fp, cfg.tau, span_cap=cfg.span_cap)
    spans = score_spans(fp, spans)

    query_scores: Optional[tuple[ScoredSpan, ...]] = None
    if query is not None:
        embed_text = getattr(provider, "embed_text", None)
        if embed_text is None:
            raise ValueError(
                "query conditioning needs an embedder that can encode the "
                "query text (external embedding files cannot)"
            )
        qfp = query_fingerprint(provider, query.text)  # type: ignore[arg-type]
        scored = filter_spans(spans, qfp, query.threshold)
        query_scores = tuple(scored)
        retained_keys = {(ss.span.start, ss.span.end) for ss in scored}
        dropped = [
            replace(sp, granularity=Granularity.DROPPED)
            for sp in spans
            if (sp.start, sp.end) not in retained_keys
        ]
        retained = [ss.span for ss in scored]
    else:
        dropped = []
        retained = spans

    delta: Optional[float] = None
    if retained:
        if cfg.budget is None:
            delta = resolve_delta(cfg.delta_policy, [sp.entropy for sp in retained])
            allocated = _allocate_threshold(retained, delta)
        else:
            allocated = _allocate_budget(retained, cfg.budget)
    else:
        allocated = []

    final_spans = sorted(allocated + dropped, key=lambda s: s.start)
    units: list[Unit] = []
    for sp in final_spans:
        if sp.granularity is Granularity.FINE:
            for ti in range(sp.start, sp.end):
                units.append(
                    Unit(
                        kind=Granularity.FINE,
                        start=ti,
                        end=ti + 1,
                        surface=stream[ti].surface,
                        entropy=sp.entropy,
                    )
                )
        elif sp.granularity is Granularity.COARSE:
            units.append(
                Unit(
                    kind=Granularity.COARSE,
                    start=sp.start,
                    end=sp.end,
                    surface=_coarse_surface(stream, sp, cfg.coarse_surface),
                    entropy=sp.entropy,
                )
            )
        # dropped spans emit nothing; decode reports them as gaps

    r = len(units) / n
    meta = SequenceMeta(n=n, r=r, config=snapshot)
    return PipelineResult(
        sequence=CompressedSequence(units=tuple(units), meta=meta),
        spans=tuple(final_spans),
        delta=delta,
        query_scores=query_scores,
    )


def compress(
    stream: TokenStream,
    provider: EmbeddingProvider,
    cfg: CompressionConfig,
    *,
    query: Optional[QuerySpec] = None,
) -> CompressedSequence:
    """Compress a token stream into a CompressedSequence."""
    return compress_details(stream, provider, cfg, query=query).sequence


@dataclass(frozen=True)
class DecodeResult:
    stream: TokenStream
    gaps: tuple[tuple[int, int], ...]

    @property
    def lossless(self) -> bool:
        return not self.gaps


def decode(seq: CompressedSequence, original: TokenStream) -> DecodeResult:
    """Expand unit offset metadata back into original tokens.

    With no dropped spans the result equals the original exactly; dropped
    ranges are omitted from the stream and returned as gaps.
    """
    n = len(original)
    if seq.meta.n != n:
        raise AlignmentError(
            f"compressed sequence was built over {seq.meta.n} tokens, "
            f"the supplied stream has {n}"
        )
    pos = 0
    kept: list[int] = []
    gaps: list[tuple[int, int]] = []
    for u in seq.units:
        if u.start < pos or u.end > n:
            raise CorruptionError(
                f"unit range [{u.start}, {u.end}) escapes the original stream"
            )
        if u.start > pos:
            gaps.append((pos, u.start))
        kept.extend(range(u.start, u.end))
        pos = u.end
    if pos < n:
        gaps.append((pos, n))
    stream = TokenStream(
        tokens=tuple(original[i] for i in kept), source=original.source
    )
    return DecodeResult(stream=stream, gaps=tuple(gaps))


def _config_snapshot(cfg: CompressionConfig, provider: EmbeddingProvider) -> dict:
    if isinstance(cfg.delta_policy, Absolute):
        policy = {"kind": "absolute", "value": cfg.delta_policy.value}
    elif isinstance(cfg.delta_policy, Percentile):
        policy = {"kind": "percentile", "p": cfg.delta_policy.p}
    else:  # pragma: no cover - config validation forbids this
        policy = {"kind": "unknown"}
    return {
        "tau": cfg.tau,
        "delta_policy": policy,
        "budget": cfg.budget,
        "window_radius": cfg.window_radius,
        "histogram_bins": cfg.histogram_bins,
        "coarse_surface": cfg.coarse_surface.value,
        "span_cap": cfg.span_cap,
        "embedder": provider.describe(),
    }
