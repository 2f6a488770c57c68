"""Source-checkpoint handling: `.npz` files keyed by source tensor names,
plus a seeded synthesizer for environments without a downloadable pretrained
checkpoint (weight scales chosen so activations stay O(1) through the 16
residual blocks)."""

from __future__ import annotations

import numpy as np

from .architecture import slot_mapping


def synthesize_checkpoint(seed: int, num_classes: int = 1000) -> dict[str, np.ndarray]:
    rng = np.random.default_rng(seed)
    tensors: dict[str, np.ndarray] = {}
    mapping = slot_mapping(num_classes)
    for source, slot in mapping.source_to_slot.items():
        shape = mapping.shapes[slot]
        if source.endswith(".weight") and len(shape) == 4:
            fan_in = int(np.prod(shape[:-1]))
            scale = 0.2 if ".expand." in source else 1.0
            values = rng.normal(0.0, scale * (2.0 / fan_in) ** 0.5, size=shape)
        elif source.endswith(".weight"):  # dense head
            values = rng.normal(0.0, (1.0 / shape[0]) ** 0.5, size=shape)
        elif source.endswith((".bias", ".beta", ".moving_mean")):
            values = rng.normal(0.0, 0.05, size=shape)
        else:  # gamma, moving_var
            values = rng.uniform(0.8, 1.2, size=shape)
        tensors[source] = values.astype(np.float32)
    return tensors


def save_checkpoint(tensors: dict[str, np.ndarray], path) -> None:
    np.savez(path, **tensors)


def load_checkpoint(path) -> dict[str, np.ndarray]:
    with np.load(path) as data:
        return {name: data[name] for name in data.files}
