"""Command-line front end.

Subcommands: ``compress`` (file -> compressed sequence + JSON report),
``decode`` (compressed + original -> reconstructed tokens + gap report),
``simulate`` (efficiency model numbers), ``bench`` (corpus comparison
against a fixed-stride baseline and identity, with a time-vs-size
scaling exponent).

Reports are JSON-first; ``--text`` renders the human view of the same
data.  Exit codes: 0 success, 1 lossy decode, 2 usage, 3 I/O, 4 bad file
format or corrupt data, 5 alignment mismatch.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

import numpy as np

from . import codec
from .compress import compress_details, decode
from .embedder import BuiltinEmbedder, ExternalEmbeddings, load_embeddings
from .errors import (
    AlignmentError,
    CorruptionError,
    DataError,
    FormatError,
)
from .kernels import BACKEND
from .pretokenizer import pretokenize, read_pretokenized
from .query import QuerySpec
from .theory import CostModel, compute_gain, compute_gain_quadratic, memory_gain, stacked_speedup
from .types import (
    Absolute,
    BuiltinSpec,
    CoarseSurface,
    CompressionConfig,
    Percentile,
    TokenStream,
)

EXIT_OK = 0
EXIT_LOSSY = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_FORMAT = 4
EXIT_ALIGNMENT = 5


class _UsageError(Exception):
    pass


def _add_compression_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tau", type=float, default=0.7, help="similarity threshold in [-1, 1]")
    p.add_argument("--delta", type=float, default=None,
                   help="absolute entropy threshold (overrides --delta-percentile)")
    p.add_argument("--delta-percentile", type=float, default=60.0,
                   help="entropy threshold at this percentile of span entropies")
    p.add_argument("--budget", type=int, default=None, help="maximum emitted token count")
    p.add_argument("--ratio", type=float, default=None,
                   help="target compression ratio; translated to a budget of ceil(ratio*n)")
    p.add_argument("--window-radius", type=int, default=2, help="context window radius")
    p.add_argument("--dim", type=int, default=64, help="builtin embedder dimension")
    p.add_argument("--seed", type=int, default=42, help="builtin embedder seed")
    p.add_argument("--bins", type=int, default=None,
                   help="histogram bins for quantized span formation (exact when omitted)")
    p.add_argument("--embeddings", type=str, default=None,
                   help="SEMF file with precomputed embeddings")
    p.add_argument("--query", type=str, default=None,
                   help="filter spans by importance for this query text")
    p.add_argument("--query-threshold", type=float, default=0.0,
                   help="importance threshold for --query")
    p.add_argument("--span-cap", type=int, default=None, help="maximum span length")
    p.add_argument("--coarse-surface", choices=["concat", "first"], default="concat",
                   help="surface policy for merged units")
    p.add_argument("--pretokenized", action="store_true",
                   help="input is one token per line (blank line terminates)")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="semtoken", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compress", help="compress a text or token file")
    pc.add_argument("input", type=str)
    pc.add_argument("-o", "--output", type=str, default=None,
                    help="compressed sequence path (default: INPUT.stc.jsonl)")
    pc.add_argument("--report", type=str, default=None,
                    help="write the JSON report here instead of stdout")
    pc.add_argument("--text", action="store_true", help="human summary instead of JSON")
    _add_compression_flags(pc)
    pc.set_defaults(func=_cmd_compress)

    pd = sub.add_parser("decode", help="reconstruct tokens from a compressed sequence")
    pd.add_argument("compressed", type=str)
    pd.add_argument("original", type=str, help="the original input file")
    pd.add_argument("-o", "--output", type=str, default=None,
                    help="reconstructed token file (default: COMPRESSED.decoded.txt)")
    pd.add_argument("--pretokenized", action="store_true",
                    help="original is one token per line")
    pd.set_defaults(func=_cmd_decode)

    ps = sub.add_parser("simulate", help="evaluate the efficiency cost model")
    ps.add_argument("--n", type=int, default=None, help="original token count")
    ps.add_argument("--n-prime", type=int, default=None, help="compressed token count")
    ps.add_argument("--r", type=float, default=None, help="compression ratio in (0, 1]")
    ps.add_argument("--d", type=int, default=4096, help="hidden dimension")
    ps.add_argument("--s", type=int, default=2, help="element size in bytes")
    ps.add_argument("--layers", type=int, default=32, help="decoder layer count")
    ps.add_argument("--g-attn", type=float, default=1.0,
                    help="orthogonal attention-kernel speedup factor")
    ps.add_argument("--quadratic", action="store_true",
                    help="also report the 1/r^2 gain of a quadratic-cost view")
    ps.set_defaults(func=_cmd_simulate)

    pb = sub.add_parser("bench", help="compare compression across a corpus directory")
    pb.add_argument("corpus", type=str)
    pb.add_argument("--stride", type=int, default=4,
                    help="chunk width of the fixed-stride baseline")
    pb.add_argument("--repeats", type=int, default=3, help="timing repeats (min is kept)")
    pb.add_argument("--jobs", type=int, default=1,
                    help="process files concurrently (timings get noisier)")
    pb.add_argument("--text", action="store_true", help="aligned table instead of JSON")
    pb.add_argument("--json-out", type=str, default=None, help="also write the JSON here")
    _add_compression_flags(pb)
    pb.set_defaults(func=_cmd_bench)

    return ap


def _config_from_args(args, budget: Optional[int]) -> CompressionConfig:
    if args.delta is not None:
        policy = Absolute(args.delta)
    else:
        policy = Percentile(args.delta_percentile)
    return CompressionConfig(
        tau=args.tau,
        delta_policy=policy,
        budget=budget,
        window_radius=args.window_radius,
        embedder=BuiltinSpec(dim=args.dim, seed=args.seed),
        histogram_bins=args.bins,
        coarse_surface=(
            CoarseSurface.FIRST_TOKEN if args.coarse_surface == "first" else CoarseSurface.CONCAT
        ),
        span_cap=args.span_cap,
    )


def _read_stream(path: str, pretokenized: bool) -> TokenStream:
    text = Path(path).read_text(encoding="utf-8")
    return read_pretokenized(text) if pretokenized else pretokenize(text)


def _resolve_budget(args, n: int) -> Optional[int]:
    if args.budget is not None and args.ratio is not None:
        raise _UsageError("--budget and --ratio are mutually exclusive")
    if args.budget is not None:
        if args.budget < 1:
            raise _UsageError("--budget must be >= 1")
        return args.budget
    if args.ratio is not None:
        if not 0.0 < args.ratio <= 1.0:
            raise _UsageError("--ratio must lie in (0, 1]")
        return max(1, math.ceil(args.ratio * n)) if n else None
    return None


def _make_provider(args, stream: TokenStream):
    if args.embeddings is not None:
        matrix = load_embeddings(args.embeddings, expected_n=len(stream))
        return ExternalEmbeddings(matrix=matrix, path=args.embeddings)
    return BuiltinEmbedder(dim=args.dim, seed=args.seed, window_radius=args.window_radius)


def _query_from_args(args) -> Optional[QuerySpec]:
    if args.query is None:
        return None
    if args.embeddings is not None:
        raise _UsageError("--query needs the builtin embedder; it cannot "
                          "be combined with --embeddings")
    return QuerySpec(text=args.query, threshold=args.query_threshold)


def _entropy_histogram(entropies: list[float]) -> dict:
    if not entropies:
        return {"bin_edges": [], "counts": []}
    counts, edges = np.histogram(np.asarray(entropies, dtype=np.float64), bins=32)
    return {"bin_edges": [float(e) for e in edges], "counts": [int(c) for c in counts]}


def _compress_report(args, stream, result) -> dict:
    seq = result.sequence
    importance = {}
    if result.query_scores is not None:
        importance = {
            (ss.span.start, ss.span.end): ss.importance for ss in result.query_scores
        }
    profile = [
        {
            "start": sp.start,
            "width": sp.width,
            "entropy": sp.entropy,
            "granularity": sp.granularity.value,
            "importance": importance.get((sp.start, sp.end)),
        }
        for sp in result.spans
    ]
    return {
        "input": args.input if hasattr(args, "input") else "",
        "n": seq.meta.n,
        "m_units": len(seq.units),
        "emitted_tokens": seq.emitted_tokens,
        "r": seq.meta.r,
        "span_count": len(result.spans),
        "delta": result.delta,
        "entropy_histogram": _entropy_histogram([sp.entropy for sp in result.spans]),
        "density_profile": profile,
        "backend": BACKEND,
        "config": seq.meta.config,
        "query": (
            {"text": args.query, "threshold": args.query_threshold}
            if args.query is not None
            else None
        ),
    }


def _cmd_compress(args) -> int:
    query = _query_from_args(args)
    stream = _read_stream(args.input, args.pretokenized)
    budget = _resolve_budget(args, len(stream))
    cfg = _config_from_args(args, budget)
    provider = _make_provider(args, stream)
    result = compress_details(stream, provider, cfg, query=query)

    out_path = args.output or (args.input + ".stc.jsonl")
    with open(out_path, "w", encoding="utf-8") as fh:
        codec.dump(result.sequence, fh)

    report = _compress_report(args, stream, result)
    if args.report is not None:
        Path(args.report).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    if args.text:
        meta = result.sequence.meta
        print(f"input            {args.input}")
        print(f"tokens           {meta.n}")
        print(f"emitted tokens   {result.sequence.emitted_tokens}")
        print(f"ratio r          {meta.r:.4f}")
        print(f"spans            {len(result.spans)}")
        print(f"delta            {result.delta if result.delta is not None else '-'}")
        print(f"output           {out_path}")
    elif args.report is None:
        print(json.dumps(report, indent=2))
    return EXIT_OK


def _cmd_decode(args) -> int:
    with open(args.compressed, "r", encoding="utf-8") as fh:
        seq = codec.load(fh)
    original = _read_stream(args.original, args.pretokenized)
    result = decode(seq, original)
    out_path = args.output or (args.compressed + ".decoded.txt")
    with open(out_path, "w", encoding="utf-8") as fh:
        for tok in result.stream:
            fh.write(tok.surface + "\n")
    report = {
        "n": seq.meta.n,
        "recovered_tokens": len(result.stream),
        "lossless": result.lossless,
        "gaps": [[a, b] for a, b in result.gaps],
        "output": out_path,
    }
    print(json.dumps(report, indent=2))
    return EXIT_OK if result.lossless else EXIT_LOSSY


def _cmd_simulate(args) -> int:
    n, n_prime, r = args.n, args.n_prime, args.r
    if r is not None and n_prime is not None:
        raise _UsageError("--r and --n-prime are mutually exclusive")
    if n is not None:
        if n_prime is None:
            n_prime = n if r is None else max(1, round(r * n))
        model = CostModel(n=n, n_prime=n_prime, d=args.d, elem_bytes=args.s,
                          layers=args.layers, g_attn=args.g_attn)
        report = model.report(quadratic=args.quadratic)
        report["n"] = n
        report["n_prime"] = n_prime
    else:
        if n_prime is not None:
            raise _UsageError("--n-prime needs --n")
        if r is None:
            r = 1.0
        if not 0.0 < r <= 1.0:
            raise _UsageError("--r must lie in (0, 1]")
        if args.g_attn < 1.0:
            raise _UsageError("--g-attn must be >= 1")
        report = {
            "n": None,
            "n_prime": None,
            "r": r,
            "compute_gain": compute_gain(r),
            "memory_gain": memory_gain(r),
            "g_attn": args.g_attn,
            "stacked_speedup": stacked_speedup(r, args.g_attn),
            "quadratic_gain": compute_gain_quadratic(r) if args.quadratic else None,
            "kv": None,
            "params": {"d": args.d, "elem_bytes": args.s, "layers": args.layers},
        }
    print(json.dumps(report, indent=2))
    return EXIT_OK


def _bench_one(path: Path, args) -> dict:
    query = _query_from_args(args)
    stream = _read_stream(str(path), args.pretokenized)
    n = len(stream)
    budget = _resolve_budget(args, n)
    cfg = _config_from_args(args, budget)
    provider = _make_provider(args, stream)
    best = None
    result = None
    for _ in range(max(1, args.repeats)):
        t0 = time.perf_counter()
        result = compress_details(stream, provider, cfg, query=query)
        dt = time.perf_counter() - t0
        if best is None or dt < best:
            best = dt
    assert result is not None and best is not None
    r_sem = result.sequence.meta.r
    r_stride = (math.ceil(n / args.stride) / n) if n else 1.0
    return {
        "name": path.name,
        "n": n,
        "time_s": best,
        "r_semtoken": r_sem,
        "r_stride": r_stride,
        "r_identity": 1.0,
        "stride_beats_semtoken": r_stride < r_sem,
    }


def _cmd_bench(args) -> int:
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        raise _UsageError(f"{args.corpus}: not a directory")
    if args.stride < 1:
        raise _UsageError("--stride must be >= 1")
    files = sorted(p for p in corpus.iterdir() if p.is_file())
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(lambda p: _bench_one(p, args), files))
    else:
        rows = [_bench_one(p, args) for p in files]
    rows.sort(key=lambda row: row["name"])

    pts = [(row["n"], row["time_s"]) for row in rows if row["n"] >= 1 and row["time_s"] > 0]
    if len({n for n, _ in pts}) >= 3:
        xs = np.log([float(n) for n, _ in pts])
        ys = np.log([t for _, t in pts])
        exponent = float(np.polyfit(xs, ys, 1)[0])
    else:
        exponent = None

    cfg = _config_from_args(args, None)
    report = {
        "corpus": str(corpus),
        "stride": args.stride,
        "repeats": args.repeats,
        "backend": BACKEND,
        "config": {
            "tau": cfg.tau,
            "window_radius": cfg.window_radius,
            "dim": args.dim,
            "seed": args.seed,
            "histogram_bins": args.bins,
            "budget": args.budget,
            "ratio": args.ratio,
        },
        "files": rows,
        "scaling": {"exponent": exponent, "points": len(pts)},
    }
    if args.json_out is not None:
        Path(args.json_out).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    if args.text:
        name_w = max([len(r["name"]) for r in rows] + [4])
        print(f"{'file':<{name_w}}  {'n':>8}  {'time_s':>10}  {'r_sem':>7}  {'r_stride':>8}  flag")
        for row in rows:
            flag = "stride-wins" if row["stride_beats_semtoken"] else ""
            print(
                f"{row['name']:<{name_w}}  {row['n']:>8}  {row['time_s']:>10.4f}  "
                f"{row['r_semtoken']:>7.4f}  {row['r_stride']:>8.4f}  {flag}"
            )
        exp = f"{exponent:.3f}" if exponent is not None else "n/a"
        print(f"time-vs-n scaling exponent: {exp} over {len(pts)} files")
    else:
        print(json.dumps(report, indent=2))
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"semtoken: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"semtoken: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AlignmentError as exc:
        print(f"semtoken: alignment error: {exc}", file=sys.stderr)
        return EXIT_ALIGNMENT
    except (FormatError, DataError, CorruptionError) as exc:
        print(f"semtoken: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"semtoken: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
