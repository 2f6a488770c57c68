"""Exporter entry points.

    atelier-export synth-checkpoint --seed N --out ckpt.npz
    atelier-export export-weights   --src ckpt.npz --out weights.atlr
    atelier-export export-fixtures  --src ckpt.npz --images DIR --out fixtures.atlr
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .architecture import slot_mapping
from .atlr import write_atlr
from .checkpoint import load_checkpoint, save_checkpoint, synthesize_checkpoint
from .forward import preprocess, run_model

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp"}


def export_weights(source_path, out_path, num_classes: int = 1000) -> int:
    """Map every source tensor into its archive slot; payloads are copied
    bit-exactly. Unmapped source tensors and shape mismatches are errors."""
    ckpt = load_checkpoint(source_path)
    mapping = slot_mapping(num_classes)
    unmapped = sorted(set(ckpt) - set(mapping.source_to_slot))
    if unmapped:
        raise ValueError(f"unmapped source tensor(s): {unmapped[:5]}")
    missing = sorted(set(mapping.source_to_slot) - set(ckpt))
    if missing:
        raise ValueError(f"source checkpoint missing tensor(s): {missing[:5]}")
    entries: dict[str, np.ndarray] = {}
    for source, slot in mapping.source_to_slot.items():
        arr = ckpt[source]
        expected = mapping.shapes[slot]
        if tuple(arr.shape) != expected:
            raise ValueError(f"{source} -> {slot}: shape {arr.shape} != expected {expected}")
        entries[slot] = arr
    write_atlr(entries, out_path)
    return len(entries)


def export_reference_activations(source_path, image_dir, out_path) -> list[str]:
    """For each fixture image store the preprocessed input plus the reference
    logits / probs / pooled embedding computed by the float64 forward."""
    ckpt = load_checkpoint(source_path)
    images = sorted(p for p in Path(image_dir).iterdir()
                    if p.suffix.lower() in IMAGE_SUFFIXES)
    if not images:
        raise ValueError(f"no fixture images under {image_dir}")
    entries: dict[str, np.ndarray] = {}
    names = []
    for path in images:
        stem = path.stem
        names.append(stem)
        x = preprocess(path)
        outputs = run_model(ckpt, x)
        entries[f"fixtures/{stem}/input"] = x
        entries[f"fixtures/{stem}/logits"] = outputs["logits"].astype(np.float32)
        entries[f"fixtures/{stem}/probs"] = outputs["probs"].astype(np.float32)
        entries[f"fixtures/{stem}/pooled"] = outputs["pooled"].astype(np.float32)
    write_atlr(entries, out_path)
    return names


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="atelier-export", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth-checkpoint",
                       help="deterministic random checkpoint in source format")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--classes", type=int, default=1000)
    p.add_argument("--out", required=True)

    p = sub.add_parser("export-weights", help="checkpoint -> .atlr archive")
    p.add_argument("--src", required=True)
    p.add_argument("--classes", type=int, default=1000)
    p.add_argument("--out", required=True)

    p = sub.add_parser("export-fixtures",
                       help="reference activations for parity tests")
    p.add_argument("--src", required=True)
    p.add_argument("--images", required=True)
    p.add_argument("--out", required=True)

    args = parser.parse_args(argv)
    if args.command == "synth-checkpoint":
        save_checkpoint(synthesize_checkpoint(args.seed, args.classes), args.out)
        print(f"synthetic checkpoint (seed {args.seed}) -> {args.out}")
    elif args.command == "export-weights":
        count = export_weights(args.src, args.out, args.classes)
        print(f"{count} slots -> {args.out}")
    else:
        names = export_reference_activations(args.src, args.images, args.out)
        print(f"{len(names)} fixtures ({', '.join(names)}) -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
