"""Export contextual token embeddings from a frozen encoder to SEMF.

Pipeline: pretokenize the document with the core-compatible rules, run
the encoder over the text (in chunks when it exceeds the model length,
or per token window with ``window_radius``), then for every core token
mean-pool the hidden states of all encoder subwords whose character
ranges overlap the token's range, and L2-normalize.  The SEMF row count
therefore always equals the core token count for the same file.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import torch
from transformers import AutoModel, AutoTokenizer

from .pretokenizer import CoreToken, pretokenize
from .semf import write_semf


class AlignmentExportError(Exception):
    """Raised when some core token is covered by no encoder subword."""

    def __init__(self, token_index: int, char_offset: int, surface: str):
        self.token_index = token_index
        self.char_offset = char_offset
        self.surface = surface
        super().__init__(
            f"no encoder subword overlaps token {token_index} "
            f"({surface!r} at character offset {char_offset})"
        )


@dataclass(frozen=True)
class Encoder:
    tokenizer: object
    model: object
    max_length: int

    @torch.no_grad()
    def hidden_states(self, texts: list[str]):
        """Last hidden layer plus character offsets for a batch of texts."""
        enc = self.tokenizer(
            texts,
            return_offsets_mapping=True,
            padding=True,
            truncation=True,
            max_length=self.max_length,
            return_tensors="pt",
        )
        offsets = enc.pop("offset_mapping")
        out = self.model(**enc).last_hidden_state
        return out.numpy(), offsets.numpy(), enc["attention_mask"].numpy()


def load_encoder(
    model: str,
    revision: Optional[str] = None,
    max_length: Optional[int] = None,
) -> Encoder:
    kwargs = {} if revision is None else {"revision": revision}
    tokenizer = AutoTokenizer.from_pretrained(model, use_fast=True, **kwargs)
    net = AutoModel.from_pretrained(model, **kwargs)
    net.eval()
    limit = max_length or min(int(getattr(tokenizer, "model_max_length", 512)), 512)
    return Encoder(tokenizer=tokenizer, model=net, max_length=limit)


def _pool_rows(
    tokens: list[CoreToken],
    pieces: list[tuple[int, int, np.ndarray]],
    dim: int,
) -> tuple[np.ndarray, list[int]]:
    """Mean-pool subword vectors onto tokens by character-range overlap."""
    sums = np.zeros((len(tokens), dim), dtype=np.float64)
    counts = np.zeros(len(tokens), dtype=np.int64)
    tok_ptr = 0
    for a, b, vec in sorted(pieces, key=lambda p: (p[0], p[1])):
        while tok_ptr < len(tokens) and tokens[tok_ptr].end <= a:
            tok_ptr += 1
        t = tok_ptr
        while t < len(tokens) and tokens[t].start < b:
            sums[t] += vec
            counts[t] += 1
            t += 1
    uncovered = [i for i in range(len(tokens)) if counts[i] == 0]
    rows = np.zeros_like(sums)
    for i in range(len(tokens)):
        if counts[i] == 0:
            rows[i, 0] = 1.0  # placeholder; caller decides whether to error
            continue
        mean = sums[i] / counts[i]
        norm = float(np.linalg.norm(mean))
        rows[i] = mean / norm if norm > 1e-12 else 0.0
        if norm <= 1e-12:
            rows[i, 0] = 1.0
    return rows, uncovered


def _chunk_spans(text: str, encoder: Encoder) -> list[tuple[int, int]]:
    """Split the text into character spans the encoder can take whole."""
    enc = encoder.tokenizer(
        text,
        return_offsets_mapping=True,
        add_special_tokens=False,
        truncation=False,
    )
    offs = [(a, b) for a, b in enc["offset_mapping"] if b > a]
    if not offs:
        return []
    specials = encoder.tokenizer.num_special_tokens_to_add()
    budget = max(8, encoder.max_length - specials)
    spans = []
    for i in range(0, len(offs), budget):
        group = offs[i : i + budget]
        spans.append((group[0][0], group[-1][1]))
    return spans


def embed_document(
    text: str,
    encoder: Encoder,
    *,
    batch_size: int = 8,
    window_radius: Optional[int] = None,
    allow_uncovered: bool = False,
) -> np.ndarray:
    """One unit-norm embedding row per core token of ``text``."""
    tokens = pretokenize(text)
    dim = int(encoder.model.config.hidden_size)
    if not tokens:
        return np.zeros((0, dim), dtype=np.float64)
    if window_radius is None:
        rows, uncovered = _embed_whole(text, tokens, encoder, batch_size, dim)
    else:
        rows, uncovered = _embed_windows(
            tokens, encoder, batch_size, dim, window_radius
        )
    if uncovered and not allow_uncovered:
        i = uncovered[0]
        raise AlignmentExportError(i, tokens[i].start, tokens[i].surface)
    return rows


def _embed_whole(text, tokens, encoder, batch_size, dim):
    spans = _chunk_spans(text, encoder)
    pieces: list[tuple[int, int, np.ndarray]] = []
    for i in range(0, len(spans), batch_size):
        batch = spans[i : i + batch_size]
        texts = [text[a:b] for a, b in batch]
        hidden, offsets, mask = encoder.hidden_states(texts)
        for bi, (base, _) in enumerate(batch):
            for si in range(hidden.shape[1]):
                if not mask[bi, si]:
                    continue
                a, b = int(offsets[bi, si, 0]), int(offsets[bi, si, 1])
                if b <= a:
                    continue  # special tokens
                pieces.append((base + a, base + b, hidden[bi, si].astype(np.float64)))
    return _pool_rows(tokens, pieces, dim)


def _embed_windows(tokens, encoder, batch_size, dim, k):
    rows = np.zeros((len(tokens), dim), dtype=np.float64)
    uncovered: list[int] = []
    jobs = []
    for i, tok in enumerate(tokens):
        lo = max(0, i - k)
        hi = min(len(tokens), i + k + 1)
        parts = [tokens[j].surface for j in range(lo, hi)]
        prefix = 0
        for j in range(lo, i):
            prefix += len(tokens[j].surface) + 1
        jobs.append((i, " ".join(parts), prefix, prefix + len(tok.surface)))
    for start in range(0, len(jobs), batch_size):
        batch = jobs[start : start + batch_size]
        hidden, offsets, mask = encoder.hidden_states([j[1] for j in batch])
        for bi, (ti, _, ca, cb) in enumerate(batch):
            acc = np.zeros(dim, dtype=np.float64)
            count = 0
            for si in range(hidden.shape[1]):
                if not mask[bi, si]:
                    continue
                a, b = int(offsets[bi, si, 0]), int(offsets[bi, si, 1])
                if b <= a:
                    continue
                if a < cb and ca < b:
                    acc += hidden[bi, si].astype(np.float64)
                    count += 1
            if count == 0:
                uncovered.append(ti)
                rows[ti, 0] = 1.0
                continue
            mean = acc / count
            norm = float(np.linalg.norm(mean))
            if norm > 1e-12:
                rows[ti] = mean / norm
            else:
                rows[ti, 0] = 1.0
    return rows, uncovered


def export_file(
    input_path,
    output_path,
    encoder: Encoder,
    *,
    batch_size: int = 8,
    window_radius: Optional[int] = None,
    allow_uncovered: bool = False,
) -> int:
    """Export embeddings for a text file; returns the row count."""
    with open(input_path, "r", encoding="utf-8") as fh:
        text = fh.read()
    rows = embed_document(
        text,
        encoder,
        batch_size=batch_size,
        window_radius=window_radius,
        allow_uncovered=allow_uncovered,
    )
    write_semf(rows, output_path)
    return rows.shape[0]
