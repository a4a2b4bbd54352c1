"""Line-delimited record format for compressed sequences.

One JSON object per line.  The first line is the header
``{"n": ..., "r": ..., "config": {...}}``; every following line is a unit
``{"kind": "fine"|"coarse", "start": ..., "end": ..., "surface": ...,
"entropy": ...}``.  JSON float round-tripping is exact, so dump followed
by load reproduces the sequence losslessly.
"""

from __future__ import annotations

import json
from typing import IO

from .errors import FormatError
from .types import CompressedSequence, Granularity, SequenceMeta, Unit

_KINDS = {
    Granularity.FINE: "fine",
    Granularity.COARSE: "coarse",
}
_KINDS_BACK = {v: k for k, v in _KINDS.items()}


def dumps(seq: CompressedSequence) -> str:
    lines = [
        json.dumps(
            {"n": seq.meta.n, "r": seq.meta.r, "config": seq.meta.config},
            ensure_ascii=False,
        )
    ]
    for u in seq.units:
        lines.append(
            json.dumps(
                {
                    "kind": _KINDS[u.kind],
                    "start": u.start,
                    "end": u.end,
                    "surface": u.surface,
                    "entropy": u.entropy,
                },
                ensure_ascii=False,
            )
        )
    return "\n".join(lines) + "\n"


def dump(seq: CompressedSequence, fh: IO[str]) -> None:
    fh.write(dumps(seq))


def loads(text: str) -> CompressedSequence:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("compressed sequence file is empty (missing header)")
    header = _parse_line(lines[0], 1)
    for key in ("n", "r", "config"):
        if key not in header:
            raise FormatError(f"header is missing required field {key!r}")
    units = []
    for lineno, ln in enumerate(lines[1:], start=2):
        rec = _parse_line(ln, lineno)
        try:
            kind = _KINDS_BACK[rec["kind"]]
            unit = Unit(
                kind=kind,
                start=int(rec["start"]),
                end=int(rec["end"]),
                surface=str(rec["surface"]),
                entropy=float(rec["entropy"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"line {lineno}: invalid unit record: {exc}") from exc
        units.append(unit)
    try:
        meta = SequenceMeta(
            n=int(header["n"]), r=float(header["r"]), config=dict(header["config"])
        )
        return CompressedSequence(units=tuple(units), meta=meta)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"invalid compressed sequence: {exc}") from exc


def load(fh: IO[str]) -> CompressedSequence:
    return loads(fh.read())


def _parse_line(line: str, lineno: int) -> dict:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {lineno}: not valid JSON: {exc}") from exc
    if not isinstance(rec, dict):
        raise FormatError(f"line {lineno}: expected a JSON object")
    return rec
