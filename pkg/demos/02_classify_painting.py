#!/usr/bin/env python3
"""Build the 50-layer network from an archive and classify a painting image:
the top-5 table mirrors what the /api/classify route returns.

Run from the repo root:  python demos/02_classify_painting.py
"""

from _common import FIXTURE_IMAGES, STYLE_NAMES, demo_archive

from atelier import resnet
from atelier.data import preprocess
from atelier.metrics import top_k

print("assembling ResNet50V2 from a synthetic archive (19-class head)...")
model = resnet.build_model(19, demo_archive())
print(f"  weighted layers: {resnet.WEIGHTED_LAYERS}, "
      f"trainable parameters: {resnet.param_count(model):,}")

image_path = sorted(FIXTURE_IMAGES.glob("*.png"))[0]
print(f"\nclassifying {image_path.name} "
      "(shortest side -> 256, center crop 224, pixels -> [-1, 1])")
x = preprocess(image_path)
result = resnet.forward(model, x[None], taps=("pooled",))

report = top_k(result.probs[0], STYLE_NAMES, k=5)
print("\n  Class                    Confidence")
print("  -----                    ----------")
for name, confidence in report.entries:
    print(f"  {name:<24} {confidence:.4f}")

embedding = result.taps["pooled"][0]
print(f"\npooled embedding: {embedding.shape[0]}-d, "
      f"L2 norm {float((embedding ** 2).sum() ** 0.5):.2f} "
      "(this vector feeds the retrieval index)")
