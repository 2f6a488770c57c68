"""Shared helpers for the demo scripts: a seeded synthetic weight archive and
an output directory. Demos are self-contained narratives, not test fixtures."""

from pathlib import Path

import numpy as np

from atelier import resnet
from atelier.archive import WeightArchive

OUT_DIR = Path(__file__).resolve().parent / "out"
FIXTURE_IMAGES = Path(__file__).resolve().parent.parent / "fixtures" / "images"

STYLE_NAMES = [
    "Abstract Expressionism", "Art Nouveau", "Baroque", "Cubism",
    "Early Renaissance", "Expressionism", "High Renaissance", "Impressionism",
    "Mannerism", "Naive Art", "Neoclassicism", "Northern Renaissance",
    "Post-Impressionism", "Realism", "Rococo", "Romanticism", "Surrealism",
    "Symbolism", "Ukiyo-e",
]


def demo_archive(num_classes: int = 19, seed: int = 7) -> WeightArchive:
    """Random weights with sane scales; enough to exercise the full engine
    without a real pretrained checkpoint."""
    rng = np.random.default_rng(seed)
    archive = WeightArchive()
    for name, shape in resnet.slot_manifest(num_classes).items():
        if name.endswith("/kernel"):
            fan_in = int(np.prod(shape[:-1]))
            scale = 0.2 if "/conv3/" in name else 1.0
            archive.add(name, rng.normal(0.0, scale * (2.0 / fan_in) ** 0.5, size=shape))
        elif name.endswith(("/bias", "/beta", "/moving_mean")):
            archive.add(name, rng.normal(0.0, 0.05, size=shape))
        else:
            archive.add(name, rng.uniform(0.8, 1.2, size=shape))
    return archive


def ensure_out() -> Path:
    OUT_DIR.mkdir(exist_ok=True)
    return OUT_DIR
