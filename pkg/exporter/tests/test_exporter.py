"""Exporter acceptance: bit-exact archive round-trips, deterministic
re-export, fixture invariants, and an optional TensorFlow cross-check of the
reference forward pass."""

import importlib.util
import os
from pathlib import Path

import numpy as np
import pytest

from atelier_exporter.architecture import slot_mapping
from atelier_exporter.atlr import read_atlr, write_atlr
from atelier_exporter.checkpoint import (
    load_checkpoint,
    save_checkpoint,
    synthesize_checkpoint,
)
from atelier_exporter.cli import export_reference_activations, export_weights, main
from atelier_exporter.forward import preprocess, run_model

REPO_ROOT = Path(__file__).resolve().parent.parent.parent
FIXTURE_IMAGES = REPO_ROOT / "fixtures" / "images"
SEED = 20240917


@pytest.fixture(scope="module")
def checkpoint():
    return synthesize_checkpoint(SEED)


@pytest.fixture(scope="module")
def checkpoint_path(checkpoint, tmp_path_factory):
    path = tmp_path_factory.mktemp("ckpt") / "checkpoint.npz"
    save_checkpoint(checkpoint, path)
    return path


def test_slot_mapping_bijective():
    mapping = slot_mapping(1000)
    slots = list(mapping.source_to_slot.values())
    assert len(slots) == len(set(slots)) == len(mapping.source_to_slot)
    assert set(slots) == set(mapping.shapes)
    assert len(slots) == 272


def test_synthesis_is_deterministic(checkpoint):
    again = synthesize_checkpoint(SEED)
    assert set(again) == set(checkpoint)
    for name, arr in checkpoint.items():
        assert np.array_equal(again[name], arr), name


def test_checkpoint_save_load_round_trip(checkpoint, checkpoint_path):
    loaded = load_checkpoint(checkpoint_path)
    assert set(loaded) == set(checkpoint)
    for name, arr in checkpoint.items():
        assert np.array_equal(loaded[name], arr)


def test_export_has_exact_slot_count_and_bit_exact_payloads(
        checkpoint, checkpoint_path, tmp_path):
    out = tmp_path / "weights.atlr"
    count = export_weights(checkpoint_path, out)
    mapping = slot_mapping(1000)
    assert count == len(mapping.source_to_slot)
    entries = read_atlr(out)
    assert set(entries) == set(mapping.shapes)
    for source, slot in mapping.source_to_slot.items():
        assert np.array_equal(entries[slot], checkpoint[source]), slot
        assert entries[slot].shape == mapping.shapes[slot]


def test_re_export_is_byte_identical(checkpoint_path, tmp_path):
    out_a = tmp_path / "a.atlr"
    out_b = tmp_path / "b.atlr"
    export_weights(checkpoint_path, out_a)
    export_weights(checkpoint_path, out_b)
    assert out_a.read_bytes() == out_b.read_bytes()


def test_exported_param_sum_near_25_6m(checkpoint):
    trainable = sum(arr.size for name, arr in checkpoint.items()
                    if "moving_" not in name)
    assert abs(trainable - 25.6e6) <= 0.01 * 25.6e6


def test_unmapped_source_tensor_rejected(checkpoint, tmp_path):
    bad = dict(checkpoint)
    bad["backbone.mystery.weight"] = np.zeros(3, dtype=np.float32)
    path = tmp_path / "bad.npz"
    save_checkpoint(bad, path)
    with pytest.raises(ValueError, match="unmapped"):
        export_weights(path, tmp_path / "out.atlr")


def test_shape_mismatch_rejected(checkpoint, tmp_path):
    bad = dict(checkpoint)
    bad["backbone.stem.conv.weight"] = bad["backbone.stem.conv.weight"].transpose(3, 0, 1, 2)
    path = tmp_path / "bad.npz"
    save_checkpoint(bad, path)
    with pytest.raises(ValueError, match="backbone.stem.conv.weight"):
        export_weights(path, tmp_path / "out.atlr")


def test_fixture_export_contracts(checkpoint_path, tmp_path):
    out = tmp_path / "fixtures.atlr"
    names = export_reference_activations(checkpoint_path, FIXTURE_IMAGES, out)
    assert len(names) == 3
    entries = read_atlr(out)
    for stem in names:
        x = entries[f"fixtures/{stem}/input"]
        probs = entries[f"fixtures/{stem}/probs"]
        logits = entries[f"fixtures/{stem}/logits"]
        pooled = entries[f"fixtures/{stem}/pooled"]
        assert x.shape == (224, 224, 3)
        assert probs.shape == (1000,) and logits.shape == (1000,)
        assert pooled.shape == (2048,)
        assert abs(float(probs.sum()) - 1.0) <= 1e-6
        assert np.all(probs > 0)
        assert np.isfinite(logits).all() and np.isfinite(pooled).all()


def test_preprocess_contract():
    x = preprocess(sorted(FIXTURE_IMAGES.glob("*.png"))[0])
    assert x.shape == (224, 224, 3) and x.dtype == np.float32
    assert x.min() >= -1.0 and x.max() <= 1.0


def test_cli_round_trip(tmp_path, capsys):
    ckpt_path = tmp_path / "ck.npz"
    assert main(["synth-checkpoint", "--seed", "5", "--out", str(ckpt_path)]) == 0
    out = tmp_path / "w.atlr"
    assert main(["export-weights", "--src", str(ckpt_path), "--out", str(out)]) == 0
    stdout = capsys.readouterr().out
    assert "272 slots" in stdout
    assert out.exists()


def test_atlr_writer_reader_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    entries = {"a/b": rng.normal(size=(2, 3)).astype(np.float32),
               "c": rng.normal(size=(5,)).astype(np.float32)}
    path = tmp_path / "small.atlr"
    write_atlr(entries, path)
    loaded = read_atlr(path)
    for name, arr in entries.items():
        assert np.array_equal(loaded[name], arr)


@pytest.mark.skipif(importlib.util.find_spec("tensorflow") is None,
                    reason="tensorflow not installed")
def test_reference_forward_matches_tensorflow(checkpoint):
    """Assemble the same graph in Keras, load the same checkpoint tensors, and
    require the float64 reference forward to agree with TF's float32 run."""
    os.environ.setdefault("TF_CPP_MIN_LOG_LEVEL", "3")
    import keras
    from keras import layers

    from atelier_exporter.architecture import BN_EPSILON, STAGE_BLOCKS, STAGE_WIDTHS

    inp = keras.Input((224, 224, 3))
    x = layers.Conv2D(64, 7, strides=2, padding="same", name="stem")(inp)
    x = layers.MaxPooling2D(3, strides=2, padding="same")(x)
    for s, (blocks, width) in enumerate(zip(STAGE_BLOCKS, STAGE_WIDTHS), start=1):
        for b in range(1, blocks + 1):
            stride = 2 if (b == 1 and s > 1) else 1
            pre = layers.ReLU()(layers.BatchNormalization(
                epsilon=BN_EPSILON, name=f"s{s}b{b}_bn0")(x))
            if b == 1:
                shortcut = layers.Conv2D(4 * width, 1, strides=stride,
                                         name=f"s{s}b{b}_proj")(pre)
            else:
                shortcut = x
            y = layers.Conv2D(width, 1, use_bias=False, name=f"s{s}b{b}_c1")(pre)
            y = layers.ReLU()(layers.BatchNormalization(
                epsilon=BN_EPSILON, name=f"s{s}b{b}_bn1")(y))
            y = layers.Conv2D(width, 3, strides=stride, padding="same",
                              use_bias=False, name=f"s{s}b{b}_c2")(y)
            y = layers.ReLU()(layers.BatchNormalization(
                epsilon=BN_EPSILON, name=f"s{s}b{b}_bn2")(y))
            y = layers.Conv2D(4 * width, 1, name=f"s{s}b{b}_c3")(y)
            x = layers.Add()([shortcut, y])
    x = layers.ReLU()(layers.BatchNormalization(epsilon=BN_EPSILON, name="post_bn")(x))
    pooled = layers.GlobalAveragePooling2D()(x)
    logits = layers.Dense(1000, name="head")(pooled)
    model = keras.Model(inp, [logits, pooled])

    def set_bn(layer, prefix):
        model.get_layer(layer).set_weights([
            checkpoint[f"{prefix}.gamma"], checkpoint[f"{prefix}.beta"],
            checkpoint[f"{prefix}.moving_mean"], checkpoint[f"{prefix}.moving_var"]])

    model.get_layer("stem").set_weights([
        checkpoint["backbone.stem.conv.weight"], checkpoint["backbone.stem.conv.bias"]])
    for s, blocks in enumerate(STAGE_BLOCKS, start=1):
        for b in range(1, blocks + 1):
            base = f"backbone.stage{s}.block{b}"
            set_bn(f"s{s}b{b}_bn0", f"{base}.preact_bn")
            set_bn(f"s{s}b{b}_bn1", f"{base}.bn1")
            set_bn(f"s{s}b{b}_bn2", f"{base}.bn2")
            model.get_layer(f"s{s}b{b}_c1").set_weights([checkpoint[f"{base}.reduce.weight"]])
            model.get_layer(f"s{s}b{b}_c2").set_weights([checkpoint[f"{base}.spatial.weight"]])
            model.get_layer(f"s{s}b{b}_c3").set_weights([
                checkpoint[f"{base}.expand.weight"], checkpoint[f"{base}.expand.bias"]])
            if b == 1:
                model.get_layer(f"s{s}b{b}_proj").set_weights([
                    checkpoint[f"{base}.projection.weight"],
                    checkpoint[f"{base}.projection.bias"]])
    set_bn("post_bn", "backbone.post_bn")
    model.get_layer("head").set_weights([
        checkpoint["head.fc.weight"], checkpoint["head.fc.bias"]])

    assert model.count_params() == 25_613_800  # trainable + BN statistics

    image = preprocess(sorted(FIXTURE_IMAGES.glob("*.png"))[0])
    reference = run_model(checkpoint, image)
    tf_logits, tf_pooled = model.predict(image[None], verbose=0)
    assert np.abs(tf_logits[0] - reference["logits"]).max() < 1e-3
    assert np.abs(tf_pooled[0] - reference["pooled"]).max() < 1e-3
