"""Contextual fingerprints for tokens.

Two providers exist: a deterministic hashing embedder (no model, no I/O,
reproducible everywhere) and precomputed embeddings loaded from a SEMF
file.  Both yield one float64 row per token.

SEMF layout (little-endian, no padding): magic ``SEMF``, u32 version=1,
u32 row count, u32 dimension, then rows * dim IEEE-754 binary32 values in
row-major order.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Optional, Protocol

import numpy as np

from . import kernels
from .errors import AlignmentError, DataError, FormatError
from .pretokenizer import pretokenize
from .types import BuiltinSpec, CompressionConfig, ExternalSpec, TokenStream

SEMF_MAGIC = b"SEMF"
SEMF_VERSION = 1

_DEFAULT_DIM = 64
_DEFAULT_SEED = 42
_DEFAULT_RADIUS = 2


def embed_tokens(
    stream: TokenStream,
    *,
    window_radius: int = _DEFAULT_RADIUS,
    dim: int = _DEFAULT_DIM,
    seed: int = _DEFAULT_SEED,
) -> np.ndarray:
    """Fingerprint every token from its +-window_radius neighborhood.

    Each window member contributes hashed character 3-grams plus a
    whole-surface feature, weighted by 1/(1+distance); rows are
    L2-normalized.  Deterministic in (surfaces, dim, seed, radius), and
    row i depends on nothing outside its window.
    """
    if dim < 2:
        raise ValueError("embedding dimension must be >= 2")
    if window_radius < 0:
        raise ValueError("window radius must be >= 0")
    n = len(stream)
    if n == 0:
        return np.zeros((0, dim), dtype=np.float64)
    surf_ids: dict[str, int] = {}
    sids = np.empty(n, dtype=np.int32)
    encoded: list[bytes] = []
    for i, tok in enumerate(stream):
        sid = surf_ids.get(tok.surface)
        if sid is None:
            sid = len(encoded)
            surf_ids[tok.surface] = sid
            encoded.append(tok.surface.encode("utf-32-le"))
        sids[i] = sid
    flat, offsets = kernels.surface_features(encoded, seed)
    return kernels.embed_rows(flat, offsets, sids, dim, window_radius)


def cosine_sim(a, b) -> float:
    """Cosine similarity, defined as 0 when either norm is below 1e-12."""
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    if av.shape != bv.shape:
        raise AlignmentError(
            f"cosine of mismatched dimensions: {av.shape} vs {bv.shape}"
        )
    na = float(np.linalg.norm(av))
    nb = float(np.linalg.norm(bv))
    if na < 1e-12 or nb < 1e-12:
        return 0.0
    s = float(np.dot(av, bv) / (na * nb))
    return max(-1.0, min(1.0, s))


def save_embeddings(matrix, path) -> None:
    """Write a SEMF file.  Values are stored as binary32 (lossy for float64)."""
    arr = np.ascontiguousarray(matrix, dtype=np.float32)
    if arr.ndim != 2:
        raise ValueError("embedding matrix must be 2-dimensional")
    n, d = arr.shape
    with open(path, "wb") as fh:
        fh.write(SEMF_MAGIC)
        fh.write(struct.pack("<III", SEMF_VERSION, n, d))
        fh.write(arr.tobytes(order="C"))


def load_embeddings(path, expected_n: Optional[int] = None) -> np.ndarray:
    """Read a SEMF file into an (n, d) float64 matrix.

    Raises FormatError for structural problems, DataError for non-finite
    values, AlignmentError when ``expected_n`` does not match the header.
    """
    with open(path, "rb") as fh:
        head = fh.read(16)
        if len(head) < 16 or head[:4] != SEMF_MAGIC:
            raise FormatError(f"{path}: not a SEMF file (bad magic)")
        version, n, d = struct.unpack("<III", head[4:16])
        if version != SEMF_VERSION:
            raise FormatError(f"{path}: unsupported SEMF version {version}")
        if d < 1 and n > 0:
            raise FormatError(f"{path}: dimension must be >= 1, got {d}")
        body = fh.read()
    expected_bytes = 4 * n * d
    if len(body) != expected_bytes:
        raise FormatError(
            f"{path}: payload holds {len(body)} bytes, header implies {expected_bytes}"
        )
    if expected_n is not None and n != expected_n:
        raise AlignmentError(
            f"{path}: file has {n} rows but the paired stream has {expected_n} tokens"
        )
    flat = np.frombuffer(body, dtype="<f4")
    if not np.all(np.isfinite(flat)):
        raise DataError(f"{path}: embedding values must be finite")
    return flat.astype(np.float64).reshape(n, d)


class EmbeddingProvider(Protocol):
    def fingerprints(self, stream: TokenStream) -> np.ndarray: ...

    def describe(self) -> dict: ...


@dataclass(frozen=True)
class BuiltinEmbedder:
    """The hashing embedder; can also encode free text (e.g. queries)."""

    dim: int = _DEFAULT_DIM
    seed: int = _DEFAULT_SEED
    window_radius: int = _DEFAULT_RADIUS

    def fingerprints(self, stream: TokenStream) -> np.ndarray:
        return embed_tokens(
            stream, window_radius=self.window_radius, dim=self.dim, seed=self.seed
        )

    def embed_text(self, text: str) -> np.ndarray:
        return self.fingerprints(pretokenize(text))

    def describe(self) -> dict:
        return {
            "kind": "builtin",
            "dim": self.dim,
            "seed": self.seed,
            "window_radius": self.window_radius,
        }


@dataclass(frozen=True)
class ExternalEmbeddings:
    """Precomputed fingerprints; must align with the paired stream."""

    matrix: np.ndarray
    path: Optional[str] = None

    def __post_init__(self) -> None:
        if self.matrix.ndim != 2:
            raise ValueError("embedding matrix must be 2-dimensional")
        if not np.all(np.isfinite(self.matrix)):
            raise DataError("embedding values must be finite")

    def fingerprints(self, stream: TokenStream) -> np.ndarray:
        if self.matrix.shape[0] != len(stream):
            raise AlignmentError(
                f"external embeddings hold {self.matrix.shape[0]} rows "
                f"but the stream has {len(stream)} tokens"
            )
        return self.matrix

    def describe(self) -> dict:
        return {
            "kind": "external",
            "n": int(self.matrix.shape[0]),
            "dim": int(self.matrix.shape[1]),
            "path": self.path,
        }


def provider_from_config(
    cfg: CompressionConfig, expected_n: Optional[int] = None
) -> BuiltinEmbedder | ExternalEmbeddings:
    spec = cfg.embedder
    if isinstance(spec, BuiltinSpec):
        return BuiltinEmbedder(
            dim=spec.dim, seed=spec.seed, window_radius=cfg.window_radius
        )
    if isinstance(spec, ExternalSpec):
        matrix = load_embeddings(spec.path, expected_n)
        return ExternalEmbeddings(matrix=matrix, path=spec.path)
    raise TypeError(f"unknown embedder spec: {spec!r}")
