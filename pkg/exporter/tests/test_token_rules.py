"""Byte-compatibility of the re-specified pretokenizer with the core.

The core is consumed strictly through its external interfaces: its CLI
compresses losslessly and decodes to a one-token-per-line file, which
must list exactly the surfaces this package's pretokenizer yields.
"""

import subprocess
import sys

import pytest

from semtoken_exporter.pretokenizer import pretokenize

CASES = [
    "the cat sat on the mat.",
    "Fig. 3 shows v1.0; (almost!) everything",
    "a_b c-d e|f = g",
    "numbers 123 and x2y9 mix",
    "spaced    out\ttabs\nand newlines",
    "",
    "one",
]


def core_cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "semtoken.cli", *argv],
        capture_output=True,
        text=True,
    )


def test_rules_on_hand_cases():
    assert [t.surface for t in pretokenize("Fig. 3")] == ["Fig", ".", "3"]
    assert [t.surface for t in pretokenize("a_b")] == ["a", "_", "b"]
    assert [t.surface for t in pretokenize("")] == []


def test_offsets_cover_surfaces():
    text = "alpha, beta; gamma!"
    for tok in pretokenize(text):
        assert text[tok.start : tok.end] == tok.surface


@pytest.mark.parametrize("text", [c for c in CASES if c])
def test_matches_core_cli_token_stream(tmp_path, text):
    doc = tmp_path / "doc.txt"
    doc.write_text(text, encoding="utf-8")
    stc = tmp_path / "doc.stc"
    proc = core_cli("compress", str(doc), "-o", str(stc))
    assert proc.returncode == 0, proc.stderr
    decoded = tmp_path / "toks.txt"
    proc = core_cli("decode", str(stc), str(doc), "-o", str(decoded))
    assert proc.returncode == 0, proc.stderr
    core_surfaces = decoded.read_text(encoding="utf-8").splitlines()
    assert core_surfaces == [t.surface for t in pretokenize(text)]
