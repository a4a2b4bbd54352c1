"""Closed-form efficiency model for token-count compression.

With r = n'/n, attention compute and KV-cache traffic both scale
linearly in sequence length, so compressing the stream buys a factor
1/r on each; an orthogonal attention-kernel speedup multiplies on top.
KV bytes follow 2 * n * d * s per layer (keys and values, d activations
each, s bytes per element).

An optional quadratic mode (gain 1/r^2) models attention cost that grows
quadratically with length; it is an extra, clearly-labeled view, not
part of the linear model above.
"""

from __future__ import annotations

from dataclasses import dataclass


def compression_ratio(n: int, n_prime: int) -> float:
    """r = n' / n for 1 <= n' <= n."""
    if n < 1:
        raise ValueError("original token count must be >= 1")
    if not 1 <= n_prime <= n:
        raise ValueError("compressed count must satisfy 1 <= n' <= n")
    return n_prime / n


def compute_gain(r: float) -> float:
    """Linear-cost speedup 1/r; also the memory gain."""
    if not 0.0 < r <= 1.0:
        raise ValueError("compression ratio must lie in (0, 1]")
    return 1.0 / r


def memory_gain(r: float) -> float:
    """Identical to :func:`compute_gain` under the linear cost model."""
    return compute_gain(r)


def compute_gain_quadratic(r: float) -> float:
    """Speedup 1/r^2 if attention cost were quadratic in length."""
    if not 0.0 < r <= 1.0:
        raise ValueError("compression ratio must lie in (0, 1]")
    return 1.0 / (r * r)


def stacked_speedup(r: float, g_attn: float) -> float:
    """Token gain times an orthogonal attention-kernel speedup."""
    if g_attn < 1.0:
        raise ValueError("kernel speedup factor must be >= 1")
    return compute_gain(r) * g_attn


def kv_bytes(n: int, d: int, s: int, layers: int) -> int:
    """Bytes of key/value activations read per decode step.

    2 * n * d activations per layer (keys and values), s bytes each.
    """
    if min(n, d, s, layers) < 1:
        raise ValueError("all cost-model parameters must be >= 1")
    return 2 * n * d * s * layers


@dataclass(frozen=True)
class CostModel:
    """Sequence/architecture parameters and the derived efficiency numbers.

    Defaults (d=4096, 2-byte elements, 32 layers) describe a 7B-class
    decoder in 16-bit precision, which makes the headline figure
    reproducible: 32768 tokens cost exactly 16 GiB of KV reads per step.
    """

    n: int
    n_prime: int
    d: int = 4096
    elem_bytes: int = 2
    layers: int = 32
    g_attn: float = 1.0

    def __post_init__(self) -> None:
        if self.n < self.n_prime or self.n_prime < 1:
            raise ValueError("counts must satisfy n >= n' >= 1")
        if min(self.d, self.elem_bytes, self.layers) < 1:
            raise ValueError("d, element size and layer count must be >= 1")
        if self.g_attn < 1.0:
            raise ValueError("kernel speedup factor must be >= 1")

    @property
    def r(self) -> float:
        return compression_ratio(self.n, self.n_prime)

    @property
    def kv_original_bytes(self) -> int:
        return kv_bytes(self.n, self.d, self.elem_bytes, self.layers)

    @property
    def kv_compressed_bytes(self) -> int:
        return kv_bytes(self.n_prime, self.d, self.elem_bytes, self.layers)

    @property
    def kv_ratio(self) -> float:
        # dividing the exact integer byte counts rounds once, the same as
        # n'/n, so this equals the compression ratio bit for bit
        return self.kv_compressed_bytes / self.kv_original_bytes

    def report(self, quadratic: bool = False) -> dict:
        r = self.r
        return {
            "n": self.n,
            "n_prime": self.n_prime,
            "r": r,
            "compute_gain": compute_gain(r),
            "memory_gain": memory_gain(r),
            "g_attn": self.g_attn,
            "stacked_speedup": stacked_speedup(r, self.g_attn),
            "quadratic_gain": compute_gain_quadratic(r) if quadratic else None,
            "kv": {
                "original_bytes": self.kv_original_bytes,
                "compressed_bytes": self.kv_compressed_bytes,
                "ratio": self.kv_ratio,
                "original_gib": self.kv_original_bytes / (1 << 30),
            },
            "params": {
                "d": self.d,
                "elem_bytes": self.elem_bytes,
                "layers": self.layers,
            },
        }
