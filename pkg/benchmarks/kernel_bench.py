#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallback.

Runs the full hot path (surface hashing, window embedding, span
formation, span statistics) on synthetic prose at several sizes and
prints per-stage timings for both backends plus the speedup.  Also
cross-checks that both backends produced bit-identical output, which is
the contract the fallback exists to honor.

Usage: python benchmarks/kernel_bench.py [--sizes 1000,4000,16000]
"""

import argparse
import time

import numpy as np

from semtoken.corpus import random_document
from semtoken.kernels import pure
from semtoken.pretokenizer import pretokenize

try:
    from semtoken.kernels import _native as native
except ImportError:
    native = None


def _prepare(n_tokens):
    stream = pretokenize(random_document(n_tokens, seed=n_tokens))
    table = {}
    encoded = []
    sids = np.empty(len(stream), dtype=np.int32)
    for i, tok in enumerate(stream):
        sid = table.get(tok.surface)
        if sid is None:
            sid = len(encoded)
            table[tok.surface] = sid
            encoded.append(tok.surface.encode("utf-32-le"))
        sids[i] = sid
    return encoded, sids, len(stream)


def _run(impl, encoded, sids, d=64, k=2, tau=0.7):
    stages = {}
    t0 = time.perf_counter()
    flat, offsets = impl.surface_features(encoded, 42)
    stages["hash"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    fp = impl.embed_rows(flat, offsets, sids, d, k)
    stages["embed"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    norms = impl.row_norms(fp)
    starts, ends = impl.span_boundaries(fp, norms, tau, 0, False, 0)
    stages["spans"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    means, ents = impl.span_stats(fp, starts, ends)
    stages["stats"] = time.perf_counter() - t0
    return stages, (fp, starts, ends, means, ents)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="1000,4000,16000",
                    help="comma-separated token counts")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if native is None:
        print("compiled backend unavailable; showing pure timings only")

    for n_tokens in sizes:
        encoded, sids, n = _prepare(n_tokens)
        p_stages, p_out = _run(pure, encoded, sids)
        line = [f"n={n:>7}"]
        if native is not None:
            n_stages, n_out = _run(native, encoded, sids)
            assert p_out[0].tobytes() == n_out[0].tobytes(), "embeddings diverged"
            assert np.array_equal(p_out[1], n_out[1]), "span starts diverged"
            assert p_out[3].tobytes() == n_out[3].tobytes(), "span means diverged"
            assert p_out[4].tobytes() == n_out[4].tobytes(), "entropies diverged"
            total_p = sum(p_stages.values())
            total_n = sum(n_stages.values())
            for key in p_stages:
                line.append(
                    f"{key}: {p_stages[key]*1e3:8.1f}ms/{n_stages[key]*1e3:7.1f}ms"
                )
            line.append(f"speedup: {total_p / total_n:6.1f}x")
            print("  ".join(line))
        else:
            for key, dt in p_stages.items():
                line.append(f"{key}: {dt*1e3:8.1f}ms")
            print("  ".join(line))
    if native is not None:
        print("bit-identical output across backends: verified")


if __name__ == "__main__":
    main()
