#!/usr/bin/env python3
"""Tour of the numeric layer primitives the network is assembled from.

Run from the repo root:  python demos/01_layer_primitives.py
"""

import numpy as np

from atelier.ops import (
    BatchNormParams,
    ConvParams,
    batch_norm_inference,
    conv2d,
    conv2d_direct,
    dense,
    pool,
    softmax,
)

print("== convolution ==")
image = np.arange(16, dtype=np.float32).reshape(1, 4, 4, 1)
edge_kernel = np.array([[-1.0, 1.0]]).reshape(1, 2, 1, 1)
params = ConvParams(kernel=edge_kernel, stride=1, padding="valid")
print("input:\n", image[0, :, :, 0])
print("horizontal difference filter:\n", conv2d(image, params)[0, :, :, 0])

print("\nThe engine lowers convolution to im2col + matrix multiply; a direct")
print("sliding-window path is kept for cross-checking. On a random case:")
rng = np.random.default_rng(0)
x = rng.normal(size=(1, 6, 6, 3)).astype(np.float32)
k = rng.normal(size=(3, 3, 3, 4)).astype(np.float32)
p = ConvParams(kernel=k, stride=2, padding="same")
gap = np.abs(conv2d(x, p) - conv2d_direct(x, p)).max()
print(f"   max |im2col - direct| = {gap:.2e}")

print("\n== batch normalization (inference) ==")
bn = BatchNormParams(gamma=[2.0], beta=[1.0], moving_mean=[5.0],
                     moving_var=[4.0], epsilon=0.0)
v = np.float32([[3.0], [5.0], [9.0]])
print("x:", v.ravel(), "-> gamma*(x-5)/2 + 1 =", batch_norm_inference(v, bn).ravel())

print("\n== pooling ==")
grid = np.float32([[1, 2], [3, 4]]).reshape(1, 2, 2, 1)
print("max pool 2x2:", pool(grid, "max", window=2, stride=2).ravel())
print("global average:", pool(grid, "global_avg").ravel())

print("\n== dense + softmax ==")
logits = dense(np.float32([[1.0, 1.0]]), np.float32([[1, 2, 0], [3, 4, 0]]),
               np.float32([0, 0, 0]))
print("logits:", logits.ravel())
probs = softmax(logits)
print("softmax:", np.round(probs, 4).ravel(), " (sums to", float(probs.sum()), ")")
