import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from semtoken.embedder import (
    BuiltinEmbedder,
    ExternalEmbeddings,
    cosine_sim,
    embed_tokens,
    load_embeddings,
    save_embeddings,
)
from semtoken.errors import AlignmentError, DataError, FormatError
from semtoken.pretokenizer import pretokenize, stream_from_surfaces


def test_empty_stream_empty_matrix():
    fp = embed_tokens(pretokenize(""), dim=8)
    assert fp.shape == (0, 8)


def test_rows_are_unit_norm():
    fp = embed_tokens(pretokenize("words of various lengths appear here today"), dim=16, seed=3)
    norms = np.linalg.norm(fp, axis=1)
    assert np.all(np.abs(norms - 1.0) < 1e-6)


def test_identical_windows_identical_rows():
    # interior tokens with the same +-k neighborhood
    stream = stream_from_surfaces(["a", "b", "c", "d", "z", "a", "b", "c", "d"])
    fp = embed_tokens(stream, window_radius=1, dim=32, seed=9)
    assert np.array_equal(fp[2], fp[7])  # both "c" between "b" and "d"


def test_repeated_token_boundary_symmetry():
    # ["x","x","x"], k=1: outer windows match each other, the middle differs
    stream = stream_from_surfaces(["x", "x", "x"])
    fp = embed_tokens(stream, window_radius=1, dim=16, seed=7)
    assert np.array_equal(fp[0], fp[2])
    assert not np.array_equal(fp[1], fp[0])


def test_row_depends_only_on_window():
    base = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta"]
    edited = base.copy()
    edited[5] = "CHANGED"
    k = 2
    fp1 = embed_tokens(stream_from_surfaces(base), window_radius=k, dim=32, seed=1)
    fp2 = embed_tokens(stream_from_surfaces(edited), window_radius=k, dim=32, seed=1)
    # token 2's window [0, 5) excludes the edited position 5
    assert np.array_equal(fp1[2], fp2[2])
    assert not np.array_equal(fp1[4], fp2[4])


def test_determinism_across_calls():
    stream = pretokenize("repeatable text, run twice")
    a = embed_tokens(stream, dim=64, seed=42)
    b = embed_tokens(stream, dim=64, seed=42)
    assert a.tobytes() == b.tobytes()


def test_seed_changes_matrix():
    stream = pretokenize("seed sensitivity check")
    a = embed_tokens(stream, dim=64, seed=1)
    b = embed_tokens(stream, dim=64, seed=2)
    assert not np.array_equal(a, b)


def test_dim_validation():
    with pytest.raises(ValueError):
        embed_tokens(pretokenize("x"), dim=1)


# -- cosine_sim ---------------------------------------------------------

def test_cosine_identity():
    v = np.array([0.3, -1.2, 4.0])
    assert cosine_sim(v, v) == pytest.approx(1.0)


def test_cosine_orthogonal():
    assert cosine_sim([1.0, 0.0], [0.0, 1.0]) == 0.0


def test_cosine_hand_value():
    assert cosine_sim([1.0, 1.0], [1.0, 0.0]) == pytest.approx(0.7071, abs=1e-4)


def test_cosine_zero_vector_is_zero():
    assert cosine_sim([0.0, 0.0], [1.0, 0.0]) == 0.0
    assert cosine_sim([1e-13, 0.0], [1.0, 0.0]) == 0.0


def test_cosine_dimension_mismatch():
    with pytest.raises(AlignmentError):
        cosine_sim([1.0, 0.0], [1.0, 0.0, 0.0])


@given(
    hst.lists(hst.floats(-10, 10), min_size=3, max_size=3),
    hst.lists(hst.floats(-10, 10), min_size=3, max_size=3),
    hst.floats(0.1, 50),
)
@settings(max_examples=200, deadline=None)
def test_cosine_symmetry_and_scale_invariance(a, b, alpha):
    s1 = cosine_sim(a, b)
    s2 = cosine_sim(b, a)
    assert s1 == pytest.approx(s2, abs=1e-12)
    assert -1.0 <= s1 <= 1.0
    scaled = [alpha * x for x in a]
    if np.linalg.norm(a) > 1e-6 and np.linalg.norm(scaled) > 1e-6:
        assert cosine_sim(scaled, b) == pytest.approx(s1, abs=1e-9)


# -- SEMF files ---------------------------------------------------------

def test_semf_roundtrip_bitwise(tmp_path):
    rng = np.random.default_rng(0)
    matrix = rng.normal(size=(3, 4)).astype(np.float32)
    path = tmp_path / "m.semf"
    save_embeddings(matrix, path)
    loaded = load_embeddings(path)
    assert loaded.shape == (3, 4)
    assert np.array_equal(loaded, matrix.astype(np.float64))


def test_semf_empty_matrix(tmp_path):
    path = tmp_path / "empty.semf"
    save_embeddings(np.zeros((0, 8), dtype=np.float32), path)
    loaded = load_embeddings(path)
    assert loaded.shape == (0, 8)


def test_semf_bad_magic(tmp_path):
    path = tmp_path / "bad.semf"
    path.write_bytes(b"NOPE" + b"\x00" * 12)
    with pytest.raises(FormatError):
        load_embeddings(path)


def test_semf_bad_version(tmp_path):
    import struct

    path = tmp_path / "v9.semf"
    path.write_bytes(b"SEMF" + struct.pack("<III", 9, 0, 4))
    with pytest.raises(FormatError):
        load_embeddings(path)


def test_semf_truncated_payload(tmp_path):
    import struct

    path = tmp_path / "short.semf"
    path.write_bytes(b"SEMF" + struct.pack("<III", 1, 2, 2) + b"\x00" * 8)
    with pytest.raises(FormatError):
        load_embeddings(path)


def test_semf_row_count_mismatch(tmp_path):
    path = tmp_path / "m.semf"
    save_embeddings(np.zeros((3, 2), dtype=np.float32), path)
    with pytest.raises(AlignmentError):
        load_embeddings(path, expected_n=4)


def test_semf_non_finite_rejected(tmp_path):
    import struct

    path = tmp_path / "nan.semf"
    payload = struct.pack("<4f", 1.0, float("nan"), 0.0, 2.0)
    path.write_bytes(b"SEMF" + struct.pack("<III", 1, 2, 2) + payload)
    with pytest.raises(DataError):
        load_embeddings(path)


def test_external_provider_alignment():
    stream = pretokenize("three short tokens")
    provider = ExternalEmbeddings(matrix=np.eye(3))
    assert provider.fingerprints(stream).shape == (3, 3)
    provider_bad = ExternalEmbeddings(matrix=np.eye(2))
    with pytest.raises(AlignmentError):
        provider_bad.fingerprints(stream)


def test_builtin_provider_describe():
    d = BuiltinEmbedder(dim=32, seed=5, window_radius=3).describe()
    assert d == {"kind": "builtin", "dim": 32, "seed": 5, "window_radius": 3}


def test_external_provider_rejects_non_finite():
    bad = np.array([[1.0, float("inf")]])
    with pytest.raises(DataError):
        ExternalEmbeddings(matrix=bad)


def test_provider_from_config_external(tmp_path):
    from semtoken.embedder import provider_from_config
    from semtoken.types import CompressionConfig, ExternalSpec

    path = tmp_path / "m.semf"
    save_embeddings(np.eye(4, dtype=np.float32), path)
    cfg = CompressionConfig(embedder=ExternalSpec(path=str(path)))
    provider = provider_from_config(cfg, expected_n=4)
    assert provider.describe()["kind"] == "external"
    with pytest.raises(AlignmentError):
        provider_from_config(cfg, expected_n=5)
