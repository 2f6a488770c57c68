#!/usr/bin/env python3
"""The three explainability views for one painting: Grad-CAM overlay,
dominant color palette, and PCA of the luminance-gradient cloud.

Run from the repo root:  python demos/03_explainability.py
Outputs land in demos/out/.
"""

from PIL import Image

from _common import FIXTURE_IMAGES, STYLE_NAMES, demo_archive, ensure_out

from atelier import resnet
from atelier.analysis import dominant_palette, luminance_gradient_pca, render_overlay
from atelier.data import load_rgb, preprocess

out_dir = ensure_out()
model = resnet.build_model(19, demo_archive())
image_path = sorted(FIXTURE_IMAGES.glob("*.png"))[1]
source = load_rgb(image_path)
x = preprocess(image_path)

print(f"painting: {image_path.name}")
predicted = int(resnet.forward(model, x[None]).probs[0].argmax())
print(f"predicted style: {STYLE_NAMES[predicted]}")

print("\n-- Grad-CAM --")
cam = resnet.grad_cam(model, x, predicted)
print(f"7x7 heatmap over the final activation, peak {cam.heatmap.max():.2f}; "
      "the gradient through the pooled head is closed-form (W[k, c] / 49).")
overlay = render_overlay(source, cam)
Image.fromarray(overlay).save(out_dir / "gradcam_overlay.png")
print(f"overlay -> {out_dir / 'gradcam_overlay.png'}")

print("\n-- dominant palette (k-means over pixel samples) --")
palette = dominant_palette(source, k=5, seed=0)
for color, share in zip(palette.colors, palette.proportions):
    r, g, b = (int(round(v)) for v in color)
    print(f"  #{r:02x}{g:02x}{b:02x}  {share:6.1%}")
(out_dir / "palette.json").write_text(palette.to_json())

print("\n-- luminance-gradient PCA --")
pca = luminance_gradient_pca(source)
print(f"eigenvalues: {pca.eigenvalues[0]:.1f} >= {pca.eigenvalues[1]:.1f}; "
      f"dominant gradient direction (gx, gy) = "
      f"({pca.directions[0][0]:+.2f}, {pca.directions[0][1]:+.2f})")
(out_dir / "gradient_scatter.csv").write_text(pca.scatter_csv())
print(f"projected scatter -> {out_dir / 'gradient_scatter.csv'}")

anisotropy = pca.eigenvalues[0] / max(pca.eigenvalues[1], 1e-9)
print(f"anisotropy ratio lambda1/lambda2 = {anisotropy:.2f} "
      "(1.0 would be direction-free brushwork)")
