"""Writer/reader for the `.atlr` named-tensor archive format.

Layout (little-endian throughout): magic "ATLR", u32 version (=1), u32 entry
count; per entry u16 name length, UTF-8 name, u8 dtype code (0 = f32), u8
rank, rank x u32 dims, u32 CRC32 of payload, then raw little-endian f32 bytes.
Payloads are copied bit-exactly, never recomputed.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

MAGIC = b"ATLR"
VERSION = 1
DTYPE_F32 = 0


def write_atlr(entries: dict[str, np.ndarray], path) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", VERSION, len(entries)))
        for name, values in entries.items():
            arr = np.ascontiguousarray(values, dtype="<f4")
            name_bytes = name.encode("utf-8")
            payload = arr.tobytes(order="C")
            fh.write(struct.pack("<H", len(name_bytes)))
            fh.write(name_bytes)
            fh.write(struct.pack("<BB", DTYPE_F32, arr.ndim))
            fh.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
            fh.write(struct.pack("<I", zlib.crc32(payload) & 0xFFFFFFFF))
            fh.write(payload)


def read_atlr(path) -> dict[str, np.ndarray]:
    entries: dict[str, np.ndarray] = {}
    with open(path, "rb") as fh:
        if fh.read(4) != MAGIC:
            raise ValueError(f"{path}: bad magic")
        version, count = struct.unpack("<II", fh.read(8))
        if version != VERSION:
            raise ValueError(f"{path}: unsupported version {version}")
        for _ in range(count):
            (name_len,) = struct.unpack("<H", fh.read(2))
            name = fh.read(name_len).decode("utf-8")
            _, rank = struct.unpack("<BB", fh.read(2))
            shape = struct.unpack(f"<{rank}I", fh.read(4 * rank))
            (crc,) = struct.unpack("<I", fh.read(4))
            payload = fh.read(4 * int(np.prod(shape, dtype=np.int64)))
            if zlib.crc32(payload) & 0xFFFFFFFF != crc:
                raise ValueError(f"{path}: checksum mismatch in {name!r}")
            if name in entries:
                raise ValueError(f"{path}: duplicate entry {name!r}")
            entries[name] = np.frombuffer(payload, dtype="<f4").reshape(shape).copy()
    return entries
