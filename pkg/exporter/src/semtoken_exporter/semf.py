"""SEMF writer/reader (the embedding-file interface shared with the core).

Layout, little-endian throughout: magic ``SEMF``; u32 version = 1; u32
row count; u32 dimension; then rows * dim IEEE-754 binary32 values in
row-major order.  No padding, no footer.
"""

from __future__ import annotations

import struct

import numpy as np

MAGIC = b"SEMF"
VERSION = 1


def write_semf(matrix: np.ndarray, path) -> None:
    arr = np.ascontiguousarray(matrix, dtype=np.float32)
    if arr.ndim != 2:
        raise ValueError("embedding matrix must be 2-dimensional")
    n, d = arr.shape
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<III", VERSION, n, d))
        fh.write(arr.tobytes(order="C"))


def read_semf(path) -> np.ndarray:
    with open(path, "rb") as fh:
        head = fh.read(16)
        if len(head) < 16 or head[:4] != MAGIC:
            raise ValueError(f"{path}: not a SEMF file")
        version, n, d = struct.unpack("<III", head[4:16])
        if version != VERSION:
            raise ValueError(f"{path}: unsupported SEMF version {version}")
        body = fh.read()
    if len(body) != 4 * n * d:
        raise ValueError(f"{path}: truncated payload")
    return np.frombuffer(body, dtype="<f4").reshape(n, d)
