"""Pure-Python kernel implementations.

This module is the arithmetic reference for the compiled extension in
``_native.pyx``.  Every loop here is written in a fixed evaluation order
(ring-ordered windows, sequential reductions, separate multiply and add)
and the extension reproduces it statement for statement, so both backends
return bit-identical float64 results.  Do not "optimize" a reduction into
a numpy call: numpy reductions reassociate and would break that contract.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

_MASK = (1 << 64) - 1
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3

# norm below this is treated as zero when computing cosines
_NORM_EPS = 1e-12


def _splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _fnv1a64(buf: bytes, start: int, length: int) -> int:
    h = _FNV_OFFSET
    for i in range(start, start + length):
        h = ((h ^ buf[i]) * _FNV_PRIME) & _MASK
    return h


def surface_features(encoded: Sequence[bytes], seed: int):
    """Hash each distinct surface into its feature base hashes.

    ``encoded`` holds one UTF-32-LE encoding per distinct surface.  The
    features of a surface are the whole surface followed by its character
    3-grams, left to right.  Returns ``(flat, offsets)`` where surface
    ``s`` owns ``flat[offsets[s]:offsets[s+1]]``.
    """
    seed_mix = _splitmix64(seed & _MASK)
    offsets = np.zeros(len(encoded) + 1, dtype=np.int64)
    feats: list[int] = []
    for i, buf in enumerate(encoded):
        nchars = len(buf) // 4
        ngrams = nchars - 2 if nchars > 2 else 0
        offsets[i + 1] = offsets[i] + 1 + ngrams
        feats.append(_splitmix64(_fnv1a64(buf, 0, len(buf)) ^ seed_mix))
        for g in range(ngrams):
            feats.append(_splitmix64(_fnv1a64(buf, 4 * g, 12) ^ seed_mix))
    return np.array(feats, dtype=np.uint64), offsets


def embed_rows(flat, offsets, sids, d: int, k: int):
    """Fingerprint every token from the hashed surfaces of its window.

    Window members are visited ring-wise (center, then distance 1 left and
    right, and so on) with weight 1/(1+distance).  A surface repeated
    within one window rotates its feature buckets by the occurrence
    number, so windows differing only in repetition count land on
    provably distinct buckets and keep distinct directions.  Rows are
    L2-normalized; an all-zero row falls back to the first basis vector.
    """
    n = len(sids)
    out = np.zeros((n, d), dtype=np.float64)
    nsurf = len(offsets) - 1

    # bucket and sign per feature (occurrence 1; higher occurrences rotate)
    idx1: list[np.ndarray] = [None] * nsurf  # type: ignore[list-item]
    sgn1: list[np.ndarray] = [None] * nsurf  # type: ignore[list-item]
    for s in range(nsurf):
        lo = int(offsets[s])
        hi = int(offsets[s + 1])
        ia = np.empty(hi - lo, dtype=np.int64)
        sa = np.empty(hi - lo, dtype=np.float64)
        for f in range(hi - lo):
            u = int(flat[lo + f])
            ia[f] = u % d
            sa[f] = -1.0 if (u >> 63) else 1.0
        idx1[s] = ia
        sgn1[s] = sa

    for i in range(n):
        row = out[i]
        seen: list[int] = []
        for t in range(k + 1):
            w = 1.0 / (1.0 + t)
            if t == 0:
                positions = (i,)
            else:
                left = i - t
                right = i + t
                if left >= 0 and right < n:
                    positions = (left, right)
                elif left >= 0:
                    positions = (left,)
                elif right < n:
                    positions = (right,)
                else:
                    positions = ()
            for j in positions:
                sid = int(sids[j])
                occ = 1
                for prev in seen:
                    if prev == sid:
                        occ += 1
                seen.append(sid)
                ia = idx1[sid]
                sa = sgn1[sid]
                if occ == 1:
                    for f in range(len(ia)):
                        row[ia[f]] += w * sa[f]
                else:
                    rot = occ - 1
                    for f in range(len(ia)):
                        e = (ia[f] + rot) % d
                        row[e] += w * sa[f]
        normsq = 0.0
        for e in range(d):
            v = row[e]
            normsq += v * v
        if normsq < _NORM_EPS * _NORM_EPS:
            for e in range(d):
                row[e] = 0.0
            row[0] = 1.0
        else:
            nrm = math.sqrt(normsq)
            for e in range(d):
                row[e] = row[e] / nrm
    return out


def row_norms(fp):
    """Euclidean norm of every row, reduced in index order."""
    n, d = fp.shape
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        acc = 0.0
        for e in range(d):
            v = fp[i, e]
            acc += v * v
        out[i] = math.sqrt(acc)
    return out


def _quantize_up(s: float, bins: int) -> float:
    # snap the score to the nearest bin edge at or above it, so a score
    # sitting exactly on an edge stays there and the predicate "score >
    # tau" is preserved whenever tau is itself an edge
    w = 2.0 / bins
    ci = math.ceil((s + 1.0) / w)
    if ci < 0:
        ci = 0
    if ci > bins:
        ci = bins
    q = -1.0 + ci * w
    if q > 1.0:
        q = 1.0
    if q < -1.0:
        q = -1.0
    return q


def span_boundaries(fp, norms, tau: float, bins: int, chained: bool, cap: int):
    """Greedy similarity segmentation of the fingerprint rows.

    Anchor mode (default) compares every candidate against the span's
    first row; chained mode compares against the previous row.  ``bins``
    0 means exact scores, otherwise scores are histogram-quantized before
    the threshold test.  ``cap`` > 0 bounds the span length.
    """
    n, d = fp.shape
    starts = np.empty(n, dtype=np.int64)
    ends = np.empty(n, dtype=np.int64)
    m = 0
    t = 0
    while t < n:
        end = t + 1
        j = t + 1
        while j < n:
            if cap > 0 and (j - t) >= cap:
                break
            ref = (j - 1) if chained else t
            if norms[ref] < _NORM_EPS or norms[j] < _NORM_EPS:
                s = 0.0
            else:
                acc = 0.0
                for e in range(d):
                    acc += fp[ref, e] * fp[j, e]
                den = norms[ref] * norms[j]
                s = acc / den
            if bins > 0:
                s = _quantize_up(s, bins)
            if s > tau:
                end = j + 1
                j += 1
            else:
                break
        starts[m] = t
        ends[m] = end
        m += 1
        t = end
    return starts[:m].copy(), ends[:m].copy()


def span_stats(fp, starts, ends):
    """Mean fingerprint and variance-trace entropy per span.

    Entropy is the trace of the population covariance, computed centered
    (two passes).  Spans whose member rows are all bit-identical short-
    circuit to exactly 0 with the shared row as their mean.
    """
    m = len(starts)
    d = fp.shape[1]
    means = np.zeros((m, d), dtype=np.float64)
    ents = np.zeros(m, dtype=np.float64)
    for s in range(m):
        a = int(starts[s])
        b = int(ends[s])
        cnt = b - a
        is_const = True
        for r in range(a + 1, b):
            for e in range(d):
                if fp[r, e] != fp[a, e]:
                    is_const = False
                    break
            if not is_const:
                break
        if is_const:
            for e in range(d):
                means[s, e] = fp[a, e]
            ents[s] = 0.0
            continue
        mrow = means[s]
        for r in range(a, b):
            for e in range(d):
                mrow[e] += fp[r, e]
        for e in range(d):
            mrow[e] = mrow[e] / cnt
        ss = 0.0
        for r in range(a, b):
            for e in range(d):
                dv = fp[r, e] - mrow[e]
                ss += dv * dv
        ent = ss / cnt
        ents[s] = ent if ent > 0.0 else 0.0
    return means, ents
