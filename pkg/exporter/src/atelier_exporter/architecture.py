"""ResNet50V2 architecture walk: source-checkpoint tensor names, their target
archive slot names, and the expected shape of every weight.

The network: 7x7/2 stem conv (64 filters, biased), 3x3/2 max pool, four
pre-activation bottleneck stages with block counts (3, 4, 6, 3) and widths
(64, 128, 256, 512); the first block of stages 2-4 downsamples with stride 2
and a 1x1 projection shortcut (stage 1's first block projects at stride 1);
a final BN+ReLU, global average pooling and a dense head. Convs inside the
residual path are bias-free except the 1x1 expand; projection and stem convs
carry biases.
"""

from __future__ import annotations

from dataclasses import dataclass

STAGE_BLOCKS = (3, 4, 6, 3)
STAGE_WIDTHS = (64, 128, 256, 512)
EMBED_DIM = 2048
BN_EPSILON = 1.001e-5
INPUT_SIZE = 224

_BN_PARTS = ("gamma", "beta", "moving_mean", "moving_var")


@dataclass(frozen=True)
class SlotMapping:
    """Bijective table: source tensor name <-> archive slot name + shape."""

    source_to_slot: dict[str, str]
    shapes: dict[str, tuple[int, ...]]  # keyed by slot name

    def source_names(self) -> list[str]:
        return list(self.source_to_slot)


def _walk(num_classes: int):
    """Yield (source_name, slot_name, shape) over every weight."""
    yield "backbone.stem.conv.weight", "stem/conv/kernel", (7, 7, 3, 64)
    yield "backbone.stem.conv.bias", "stem/conv/bias", (64,)
    in_ch = 64
    for s, (blocks, width) in enumerate(zip(STAGE_BLOCKS, STAGE_WIDTHS), start=1):
        out_ch = 4 * width
        for b in range(1, blocks + 1):
            src = f"backbone.stage{s}.block{b}"
            dst = f"stage{s}/block{b}"
            for part in _BN_PARTS:
                yield f"{src}.preact_bn.{part}", f"{dst}/preact_bn/{part}", (in_ch,)
            yield f"{src}.reduce.weight", f"{dst}/conv1/kernel", (1, 1, in_ch, width)
            for part in _BN_PARTS:
                yield f"{src}.bn1.{part}", f"{dst}/bn1/{part}", (width,)
            yield f"{src}.spatial.weight", f"{dst}/conv2/kernel", (3, 3, width, width)
            for part in _BN_PARTS:
                yield f"{src}.bn2.{part}", f"{dst}/bn2/{part}", (width,)
            yield f"{src}.expand.weight", f"{dst}/conv3/kernel", (1, 1, width, out_ch)
            yield f"{src}.expand.bias", f"{dst}/conv3/bias", (out_ch,)
            if b == 1:
                yield f"{src}.projection.weight", f"{dst}/shortcut/kernel", (1, 1, in_ch, out_ch)
                yield f"{src}.projection.bias", f"{dst}/shortcut/bias", (out_ch,)
            in_ch = out_ch
    for part in _BN_PARTS:
        yield f"backbone.post_bn.{part}", f"post_bn/{part}", (EMBED_DIM,)
    yield "head.fc.weight", "head/dense/kernel", (EMBED_DIM, num_classes)
    yield "head.fc.bias", "head/dense/bias", (num_classes,)


def slot_mapping(num_classes: int = 1000) -> SlotMapping:
    source_to_slot: dict[str, str] = {}
    shapes: dict[str, tuple[int, ...]] = {}
    for source, slot, shape in _walk(num_classes):
        source_to_slot[source] = slot
        shapes[slot] = shape
    return SlotMapping(source_to_slot=source_to_slot, shapes=shapes)


def block_strides():
    """(stage, block) -> stride; the first block of stages 2-4 is 2."""
    table = {}
    for s, blocks in enumerate(STAGE_BLOCKS, start=1):
        for b in range(1, blocks + 1):
            table[(s, b)] = 2 if (b == 1 and s > 1) else 1
    return table
