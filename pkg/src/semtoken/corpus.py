"""Deterministic synthetic corpora for tests and benchmarks.

Two flavors: free-running prose made of random words (for scaling
benchmarks), and structured documents that interleave unique-content
sentences with repetitive boilerplate blocks, carrying byte-range labels
so tests can tell the regions apart.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

_CONSONANTS = "bcdfghjklmnpqrstvwz"
_VOWELS = "aeiou"

_BOILER_WORDS = [
    "menu", "footer", "nav", "legal", "cookie", "banner", "sidebar", "badge",
]


def _word(rng: random.Random) -> str:
    n = rng.randint(2, 4)
    parts = []
    for _ in range(n):
        parts.append(rng.choice(_CONSONANTS))
        parts.append(rng.choice(_VOWELS))
    if rng.random() < 0.4:
        parts.append(rng.choice(_CONSONANTS))
    return "".join(parts)


def _sentence(rng: random.Random, lo: int = 6, hi: int = 14) -> str:
    words = [_word(rng) for _ in range(rng.randint(lo, hi))]
    return " ".join(words) + "."


def random_document(n_tokens: int, seed: int) -> str:
    """Prose of roughly ``n_tokens`` pretokenizer tokens (words + periods)."""
    rng = random.Random(seed)
    parts = []
    count = 0
    while count < n_tokens:
        s = _sentence(rng)
        parts.append(s)
        count += s.count(" ") + 2  # words plus the trailing period
    return " ".join(parts)


@dataclass(frozen=True)
class LabeledDocument:
    """Document text plus byte-range labels ('unique' or 'boilerplate')."""

    text: str
    regions: tuple[tuple[int, int, str], ...]


def structured_document(
    seed: int,
    blocks: int = 8,
    boiler_run: tuple[int, int] = (25, 45),
    unique_sentences: tuple[int, int] = (2, 3),
) -> LabeledDocument:
    """Interleave unique sentences with repeated-token boilerplate blocks.

    Boilerplate mimics markup and template residue: long runs of one
    repeated token.  Labels cover the whole text; the single joining
    space between segments belongs to the segment it precedes.
    """
    rng = random.Random(seed)
    segments: list[tuple[str, str]] = []
    for b in range(blocks):
        sents = [_sentence(rng) for _ in range(rng.randint(*unique_sentences))]
        segments.append((" ".join(sents), "unique"))
        word = rng.choice(_BOILER_WORDS)
        run = rng.randint(*boiler_run)
        segments.append((" ".join([word] * run), "boilerplate"))
    text_parts = []
    regions = []
    pos = 0
    for i, (seg, label) in enumerate(segments):
        if i > 0:
            pos += 1  # joining space
        nbytes = len(seg.encode("utf-8"))
        regions.append((pos, pos + nbytes, label))
        text_parts.append(seg)
        pos += nbytes
    return LabeledDocument(text=" ".join(text_parts), regions=tuple(regions))


def structured_corpus(n_docs: int, seed: int) -> list[LabeledDocument]:
    rng = random.Random(seed)
    return [structured_document(rng.randrange(1 << 30)) for _ in range(n_docs)]


def fixture_corpus(n_docs: int, seed: int) -> list[str]:
    """Mixed corpus for round-trip style tests: structured documents,
    plain prose, and a few shapes that stress the tokenizer (punctuation
    clusters, non-ASCII text, single tokens)."""
    rng = random.Random(seed)
    docs: list[str] = []
    for i in range(n_docs):
        kind = i % 5
        if kind == 0:
            docs.append(structured_document(rng.randrange(1 << 30), blocks=3).text)
        elif kind == 1:
            docs.append(random_document(rng.randint(40, 220), rng.randrange(1 << 30)))
        elif kind == 2:
            words = [_word(rng) for _ in range(rng.randint(5, 30))]
            docs.append(", ".join(words) + " (v1.0; 2024!)")
        elif kind == 3:
            docs.append("héllo wörld — naïve café №" + str(rng.randint(1, 99)))
        else:
            docs.append(_word(rng))
    return docs


def label_tokens(stream, regions) -> list[str]:
    """Label each token by the region owning most of its byte range."""
    labels = []
    for tok in stream:
        best = None
        best_overlap = -1
        for start, end, label in regions:
            overlap = min(tok.end, end) - max(tok.start, start)
            if overlap > best_overlap:
                best_overlap = overlap
                best = label
        labels.append(best or "unique")
    return labels
