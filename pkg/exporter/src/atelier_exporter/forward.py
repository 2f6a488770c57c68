"""Reference forward pass in float64: sliding-window einsum convolutions over
the checkpoint tensors. This is the activation oracle the inference engine is
measured against, so it is kept simple and runs entirely in double precision.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from PIL import Image

from .architecture import BN_EPSILON, INPUT_SIZE, STAGE_BLOCKS, STAGE_WIDTHS


def pad_for(size: int, k: int, stride: int, mode: str) -> tuple[int, int]:
    """TF-style `same`: total pad so output is ceil(size/stride), extra on the
    trailing edge."""
    if mode == "valid":
        return 0, 0
    out = -(-size // stride)
    total = max((out - 1) * stride + k - size, 0)
    return total // 2, total - total // 2


def conv(x: np.ndarray, kernel: np.ndarray, bias=None, stride: int = 1,
         mode: str = "same") -> np.ndarray:
    kh, kw = kernel.shape[:2]
    top, bottom = pad_for(x.shape[0], kh, stride, mode)
    left, right = pad_for(x.shape[1], kw, stride, mode)
    padded = np.pad(x, ((top, bottom), (left, right), (0, 0)))
    windows = sliding_window_view(padded, (kh, kw), axis=(0, 1))  # (H', W', C, kh, kw)
    windows = windows[::stride, ::stride]
    out = np.einsum("hwcyx,yxcf->hwf", windows, kernel, optimize=True)
    if bias is not None:
        out = out + bias
    return out


def max_pool(x: np.ndarray, window: int, stride: int) -> np.ndarray:
    top, bottom = pad_for(x.shape[0], window, stride, "same")
    left, right = pad_for(x.shape[1], window, stride, "same")
    padded = np.pad(x, ((top, bottom), (left, right), (0, 0)),
                    constant_values=-np.inf)
    windows = sliding_window_view(padded, (window, window), axis=(0, 1))
    return windows[::stride, ::stride].max(axis=(3, 4))


def batch_norm(x: np.ndarray, ckpt: dict, prefix: str) -> np.ndarray:
    gamma = ckpt[f"{prefix}.gamma"].astype(np.float64)
    beta = ckpt[f"{prefix}.beta"].astype(np.float64)
    mean = ckpt[f"{prefix}.moving_mean"].astype(np.float64)
    var = ckpt[f"{prefix}.moving_var"].astype(np.float64)
    return gamma * (x - mean) / np.sqrt(var + BN_EPSILON) + beta


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def _f64(ckpt: dict, name: str) -> np.ndarray:
    return ckpt[name].astype(np.float64)


def run_model(ckpt: dict, image: np.ndarray) -> dict[str, np.ndarray]:
    """Full forward on one preprocessed HxWx3 image; returns logits, probs and
    the pooled embedding."""
    x = image.astype(np.float64)
    x = conv(x, _f64(ckpt, "backbone.stem.conv.weight"),
             _f64(ckpt, "backbone.stem.conv.bias"), stride=2)
    x = max_pool(x, 3, 2)
    for s, blocks in enumerate(STAGE_BLOCKS, start=1):
        for b in range(1, blocks + 1):
            base = f"backbone.stage{s}.block{b}"
            stride = 2 if (b == 1 and s > 1) else 1
            pre = relu(batch_norm(x, ckpt, f"{base}.preact_bn"))
            if b == 1:
                shortcut = conv(pre, _f64(ckpt, f"{base}.projection.weight"),
                                _f64(ckpt, f"{base}.projection.bias"),
                                stride=stride, mode="valid")
            else:
                shortcut = x
            y = conv(pre, _f64(ckpt, f"{base}.reduce.weight"), mode="valid")
            y = relu(batch_norm(y, ckpt, f"{base}.bn1"))
            y = conv(y, _f64(ckpt, f"{base}.spatial.weight"), stride=stride)
            y = relu(batch_norm(y, ckpt, f"{base}.bn2"))
            y = conv(y, _f64(ckpt, f"{base}.expand.weight"),
                     _f64(ckpt, f"{base}.expand.bias"), mode="valid")
            x = shortcut + y
    x = relu(batch_norm(x, ckpt, "backbone.post_bn"))
    pooled = x.mean(axis=(0, 1))
    logits = pooled @ _f64(ckpt, "head.fc.weight") + _f64(ckpt, "head.fc.bias")
    shifted = logits - logits.max()
    exp = np.exp(shifted)
    probs = exp / exp.sum()
    return {"pooled": pooled, "logits": logits, "probs": probs}


def preprocess(path) -> np.ndarray:
    """Shortest side to 256 (bilinear), center crop 224, map to [-1, 1]."""
    with Image.open(path) as img:
        pil = img.convert("RGB")
        w, h = pil.size
        scale = 256 / min(w, h)
        new_w = max(256, round(w * scale))
        new_h = max(256, round(h * scale))
        pil = pil.resize((new_w, new_h), Image.BILINEAR)
        left = (new_w - INPUT_SIZE) // 2
        top = (new_h - INPUT_SIZE) // 2
        pil = pil.crop((left, top, left + INPUT_SIZE, top + INPUT_SIZE))
        return np.asarray(pil, dtype=np.float32) / np.float32(127.5) - np.float32(1.0)


def expected_tap_channels():
    return [4 * w for w in STAGE_WIDTHS]
