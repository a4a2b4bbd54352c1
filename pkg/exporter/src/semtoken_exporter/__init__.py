"""SEMF embedding exporter backed by a frozen transformer encoder."""

from .export import (
    AlignmentExportError,
    Encoder,
    embed_document,
    export_file,
    load_encoder,
)
from .pretokenizer import CoreToken, pretokenize
from .semf import read_semf, write_semf

__version__ = "0.1.0"

__all__ = [
    "AlignmentExportError",
    "CoreToken",
    "Encoder",
    "embed_document",
    "export_file",
    "load_encoder",
    "pretokenize",
    "read_semf",
    "write_semf",
    "__version__",
]
