"""Command-line exporter: text file -> SEMF embedding file.

The default model and revision come from ``model.lock`` next to the
package (override with --model/--revision).  Exit codes match the core
CLI convention: 0 success, 2 usage, 3 I/O, 5 alignment failure (a token
no encoder subword covers; the message carries its offset).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .export import AlignmentExportError, export_file, load_encoder

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_ALIGNMENT = 5

_LOCK_PATH = Path(__file__).resolve().parents[2] / "model.lock"


def read_lock(path: Optional[Path] = None) -> dict:
    lock = path or _LOCK_PATH
    try:
        return json.loads(lock.read_text(encoding="utf-8"))
    except FileNotFoundError:
        return {}


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="semtoken-export", description=__doc__)
    ap.add_argument("--input", required=True, help="UTF-8 text file")
    ap.add_argument("--output", required=True, help="SEMF file to write")
    ap.add_argument("--model", default=None,
                    help="model name or local path (default: model.lock)")
    ap.add_argument("--revision", default=None,
                    help="model revision (default: model.lock)")
    ap.add_argument("--batch-size", type=int, default=8)
    ap.add_argument("--window", type=int, default=None,
                    help="re-encode per +-K token window instead of whole-document")
    ap.add_argument("--max-length", type=int, default=None,
                    help="encoder length cap (default: model limit, at most 512)")
    ap.add_argument("--allow-uncovered", action="store_true",
                    help="fall back to a basis vector for uncovered tokens "
                         "instead of failing")
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE

    lock = read_lock()
    model = args.model or lock.get("model")
    revision = args.revision or lock.get("revision")
    if not model:
        print("semtoken-export: no --model given and model.lock is missing",
              file=sys.stderr)
        return EXIT_USAGE
    if args.batch_size < 1:
        print("semtoken-export: --batch-size must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if args.window is not None and args.window < 0:
        print("semtoken-export: --window must be >= 0", file=sys.stderr)
        return EXIT_USAGE

    try:
        encoder = load_encoder(model, revision=revision, max_length=args.max_length)
        n = export_file(
            args.input,
            args.output,
            encoder,
            batch_size=args.batch_size,
            window_radius=args.window,
            allow_uncovered=args.allow_uncovered,
        )
    except AlignmentExportError as exc:
        print(f"semtoken-export: alignment failure: {exc}", file=sys.stderr)
        return EXIT_ALIGNMENT
    except OSError as exc:
        print(f"semtoken-export: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(json.dumps({
        "input": args.input,
        "output": args.output,
        "model": model,
        "revision": revision,
        "rows": n,
        "window": args.window,
    }))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
