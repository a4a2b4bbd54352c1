import os

os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("TRANSFORMERS_OFFLINE", "1")

import pytest
import torch
from transformers import BertConfig, BertModel, BertTokenizerFast

# deterministic stand-in for the pinned checkpoint: this sandbox has no
# model-hub access, so tests exercise the full pipeline against a tiny
# seeded encoder saved once per session (see model.lock for real use)
_SEED = 20240 + 7


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("tiny-encoder")
    chars = list("abcdefghijklmnopqrstuvwxyz0123456789")
    punct = list(".,;:!?()[]'\"-_|=+/#@")
    vocab = (
        ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
        + chars
        + punct
        + ["##" + c for c in chars]
    )
    vocab_file = root / "vocab.txt"
    vocab_file.write_text("\n".join(vocab) + "\n", encoding="utf-8")
    tokenizer = BertTokenizerFast(vocab_file=str(vocab_file), do_lower_case=True)
    tokenizer.model_max_length = 128

    torch.manual_seed(_SEED)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=128,
    )
    model = BertModel(config)
    model.eval()

    out = root / "model"
    tokenizer.save_pretrained(out)
    model.save_pretrained(out)
    return str(out)


@pytest.fixture(scope="session")
def tiny_encoder(tiny_model_dir):
    from semtoken_exporter.export import load_encoder

    return load_encoder(tiny_model_dir)
