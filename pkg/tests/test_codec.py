import io

import pytest

from semtoken import codec
from semtoken.compress import compress, decode
from semtoken.embedder import BuiltinEmbedder
from semtoken.errors import FormatError
from semtoken.pretokenizer import pretokenize
from semtoken.types import CompressionConfig


def roundtrip(seq):
    return codec.loads(codec.dumps(seq))


def test_roundtrip_preserves_everything():
    stream = pretokenize("menu menu menu menu. unique value; strange \"quotes\" and lines")
    seq = compress(stream, BuiltinEmbedder(), CompressionConfig())
    back = roundtrip(seq)
    assert back.units == seq.units
    assert back.meta.n == seq.meta.n
    assert back.meta.r == seq.meta.r
    assert back.meta.config == seq.meta.config


def test_roundtrip_float_exactness():
    stream = pretokenize("one two three four five six seven")
    seq = compress(stream, BuiltinEmbedder(), CompressionConfig())
    back = roundtrip(seq)
    for a, b in zip(seq.units, back.units):
        assert a.entropy == b.entropy  # bitwise, via repr round-trip


def test_decode_after_reload(tmp_path):
    stream = pretokenize("alpha beta beta beta gamma")
    seq = compress(stream, BuiltinEmbedder(), CompressionConfig())
    path = tmp_path / "seq.jsonl"
    with open(path, "w", encoding="utf-8") as fh:
        codec.dump(seq, fh)
    with open(path, "r", encoding="utf-8") as fh:
        back = codec.load(fh)
    res = decode(back, stream)
    assert res.lossless
    assert res.stream == stream


def test_empty_sequence_roundtrip():
    seq = compress(pretokenize(""), BuiltinEmbedder(), CompressionConfig())
    back = roundtrip(seq)
    assert back.units == ()
    assert back.meta.n == 0


def test_empty_file_rejected():
    with pytest.raises(FormatError):
        codec.loads("")


def test_bad_json_rejected():
    with pytest.raises(FormatError):
        codec.loads('{"n": 1, "r": 1.0, "config": {}}\nnot json\n')


def test_missing_header_field_rejected():
    with pytest.raises(FormatError):
        codec.loads('{"n": 1, "r": 1.0}\n')


def test_bad_unit_kind_rejected():
    header = '{"n": 2, "r": 1.0, "config": {}}'
    unit = '{"kind": "medium", "start": 0, "end": 1, "surface": "x", "entropy": 0.0}'
    with pytest.raises(FormatError):
        codec.loads(header + "\n" + unit + "\n")


def test_non_object_line_rejected():
    with pytest.raises(FormatError):
        codec.loads("[1, 2, 3]\n")


def test_out_of_order_units_rejected():
    header = '{"n": 4, "r": 0.5, "config": {}}'
    u1 = '{"kind": "coarse", "start": 2, "end": 4, "surface": "x", "entropy": 0.0}'
    u2 = '{"kind": "coarse", "start": 0, "end": 2, "surface": "y", "entropy": 0.0}'
    with pytest.raises(FormatError):
        codec.loads("\n".join([header, u1, u2]) + "\n")


def test_dump_to_stringio():
    seq = compress(pretokenize("a b"), BuiltinEmbedder(), CompressionConfig())
    buf = io.StringIO()
    codec.dump(seq, buf)
    assert buf.getvalue().count("\n") == len(seq.units) + 1
