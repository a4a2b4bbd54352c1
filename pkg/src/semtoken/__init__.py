"""Semantic-aware compression of token sequences.

Pipeline: contextual fingerprints per token, greedy similarity spans,
variance-trace entropy per span, then fine/coarse granularity under an
optional token budget, with offset metadata for lossless decode and a
closed-form efficiency model for the savings.
"""

from .compress import (
    DecodeResult,
    PipelineResult,
    compress,
    compress_details,
    decode,
    select_top_b,
)
from .embedder import (
    BuiltinEmbedder,
    ExternalEmbeddings,
    cosine_sim,
    embed_tokens,
    load_embeddings,
    provider_from_config,
    save_embeddings,
)
from .entropy import assign_granularity, resolve_delta, span_entropy
from .errors import (
    AlignmentError,
    CorruptionError,
    DataError,
    FormatError,
    SemtokenError,
)
from .kernels import BACKEND
from .pretokenizer import pretokenize, read_pretokenized, stream_from_surfaces
from .query import QuerySpec, filter_spans, query_fingerprint, span_importance
from .spans import form_spans, form_spans_binned
from .theory import (
    CostModel,
    compression_ratio,
    compute_gain,
    compute_gain_quadratic,
    kv_bytes,
    memory_gain,
    stacked_speedup,
)
from .types import (
    Absolute,
    BuiltinSpec,
    CoarseSurface,
    CompressedSequence,
    CompressionConfig,
    ExternalSpec,
    Granularity,
    Percentile,
    Span,
    Token,
    TokenStream,
    Unit,
)

__version__ = "0.1.0"

__all__ = [
    "Absolute",
    "AlignmentError",
    "BACKEND",
    "BuiltinEmbedder",
    "BuiltinSpec",
    "CoarseSurface",
    "CompressedSequence",
    "CompressionConfig",
    "CorruptionError",
    "CostModel",
    "DataError",
    "DecodeResult",
    "ExternalEmbeddings",
    "ExternalSpec",
    "FormatError",
    "Granularity",
    "Percentile",
    "PipelineResult",
    "QuerySpec",
    "SemtokenError",
    "Span",
    "Token",
    "TokenStream",
    "Unit",
    "assign_granularity",
    "compress",
    "compress_details",
    "compression_ratio",
    "compute_gain",
    "compute_gain_quadratic",
    "cosine_sim",
    "decode",
    "embed_tokens",
    "filter_spans",
    "form_spans",
    "form_spans_binned",
    "kv_bytes",
    "load_embeddings",
    "memory_gain",
    "pretokenize",
    "provider_from_config",
    "query_fingerprint",
    "read_pretokenized",
    "resolve_delta",
    "save_embeddings",
    "select_top_b",
    "span_entropy",
    "span_importance",
    "stacked_speedup",
    "stream_from_surfaces",
    "__version__",
]
