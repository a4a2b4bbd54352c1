"""Core domain types shared across the package.

Everything here is immutable after construction; pipeline stages that
"update" a span produce a new one via :func:`dataclasses.replace`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

import numpy as np


class Granularity(enum.Enum):
    UNASSIGNED = "unassigned"
    FINE = "fine"
    COARSE = "coarse"
    DROPPED = "dropped"


class CoarseSurface(enum.Enum):
    """How a merged unit renders its text."""

    CONCAT = "concat"          # member surfaces joined by single spaces
    FIRST_TOKEN = "first_token"  # display-oriented: first member only


@dataclass(frozen=True)
class Token:
    """One token: surface text plus its half-open byte range in the source."""

    surface: str
    id: int
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.id < 0:
            raise ValueError("token id must be non-negative")
        if not 0 <= self.start < self.end:
            raise ValueError("byte range must be non-empty and non-negative")


@dataclass(frozen=True)
class TokenStream:
    """Ordered tokens over a source text.

    Byte ranges are strictly increasing and non-overlapping; the bytes
    between consecutive ranges are exactly the source's inter-token gaps,
    so the source can always be rebuilt from tokens plus gaps.
    """

    tokens: tuple[Token, ...]
    source: str

    def __post_init__(self) -> None:
        prev_end = 0
        for tok in self.tokens:
            if tok.start < prev_end:
                raise ValueError("token byte ranges must be strictly increasing")
            prev_end = tok.end

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __getitem__(self, i: int) -> Token:
        return self.tokens[i]

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]


@dataclass(frozen=True, eq=False)
class Span:
    """Contiguous token range [start, end) with cached statistics."""

    start: int
    end: int
    mean_fp: Optional[np.ndarray] = None
    entropy: float = 0.0
    granularity: Granularity = Granularity.UNASSIGNED

    def __post_init__(self) -> None:
        if not 0 <= self.start < self.end:
            raise ValueError("span must satisfy 0 <= start < end")
        if self.entropy < 0.0:
            raise ValueError("span entropy must be non-negative")

    @property
    def width(self) -> int:
        return self.end - self.start

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Span):
            return NotImplemented
        if (self.start, self.end, self.entropy, self.granularity) != (
            other.start,
            other.end,
            other.entropy,
            other.granularity,
        ):
            return False
        if self.mean_fp is None or other.mean_fp is None:
            return self.mean_fp is None and other.mean_fp is None
        return bool(np.array_equal(self.mean_fp, other.mean_fp))

    def __repr__(self) -> str:
        return (
            f"Span([{self.start}, {self.end}), entropy={self.entropy:.6g}, "
            f"granularity={self.granularity.value})"
        )


@dataclass(frozen=True)
class Unit:
    """One output unit: a kept token (fine) or a merged span (coarse)."""

    kind: Granularity
    start: int
    end: int
    surface: str
    entropy: float

    def __post_init__(self) -> None:
        if self.kind not in (Granularity.FINE, Granularity.COARSE):
            raise ValueError("unit kind must be fine or coarse")
        if not 0 <= self.start < self.end:
            raise ValueError("unit range must be non-empty")
        if self.kind is Granularity.FINE and self.end - self.start != 1:
            raise ValueError("fine units cover exactly one token")


@dataclass(frozen=True)
class SequenceMeta:
    """Bookkeeping carried with a compressed sequence."""

    n: int
    r: float
    config: dict = field(compare=True, default_factory=dict)


@dataclass(frozen=True)
class CompressedSequence:
    """Ordered output units with offset metadata into the original stream."""

    units: tuple[Unit, ...]
    meta: SequenceMeta

    def __post_init__(self) -> None:
        prev_end = 0
        for u in self.units:
            if u.start < prev_end:
                raise ValueError("unit ranges must be strictly increasing")
            prev_end = u.end
        if self.meta.n and prev_end > self.meta.n:
            raise ValueError("unit ranges exceed the original token count")

    @property
    def emitted_tokens(self) -> int:
        """Token cost of the output: one per unit (fine or coarse)."""
        return len(self.units)

    def covered_ranges(self) -> list[tuple[int, int]]:
        return [(u.start, u.end) for u in self.units]

    def gap_ranges(self) -> list[tuple[int, int]]:
        """Maximal token ranges of the original not covered by any unit."""
        gaps = []
        pos = 0
        for u in self.units:
            if u.start > pos:
                gaps.append((pos, u.start))
            pos = u.end
        if pos < self.meta.n:
            gaps.append((pos, self.meta.n))
        return gaps


@dataclass(frozen=True)
class Absolute:
    """Fixed entropy threshold."""

    value: float


@dataclass(frozen=True)
class Percentile:
    """Threshold at the p-th percentile of the document's span entropies."""

    p: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 100.0:
            raise ValueError("percentile must lie in [0, 100]")


DeltaPolicy = Union[Absolute, Percentile]


@dataclass(frozen=True)
class BuiltinSpec:
    """Selects the hashing embedder."""

    dim: int = 64
    seed: int = 42

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise ValueError("embedding dimension must be >= 2")


@dataclass(frozen=True)
class ExternalSpec:
    """Selects a precomputed embedding file."""

    path: str


EmbedderSpec = Union[BuiltinSpec, ExternalSpec]


@dataclass(frozen=True)
class CompressionConfig:
    tau: float = 0.7
    delta_policy: DeltaPolicy = Percentile(60.0)
    budget: Optional[int] = None
    window_radius: int = 2
    embedder: EmbedderSpec = BuiltinSpec()
    histogram_bins: Optional[int] = None
    coarse_surface: CoarseSurface = CoarseSurface.CONCAT
    span_cap: Optional[int] = None

    def __post_init__(self) -> None:
        if not -1.0 <= self.tau <= 1.0:
            raise ValueError("tau must lie in [-1, 1]")
        if self.budget is not None and self.budget < 1:
            raise ValueError("budget must be >= 1 when set")
        if self.window_radius < 0:
            raise ValueError("window radius must be >= 0")
        if self.histogram_bins is not None and self.histogram_bins < 2:
            raise ValueError("histogram bins must be >= 2 when set")
        if self.span_cap is not None and self.span_cap < 1:
            raise ValueError("span cap must be >= 1 when set")
