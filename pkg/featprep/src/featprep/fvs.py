"""Writers for the summarization engine's on-disk formats.

Features go into a flat binary file (magic ``FVS1``, u32 version, u32 T,
u32 D, then T*D float32 little-endian values, row-major); everything else
into a JSON sidecar named after the video id. These formats are the only
coupling to the engine.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

MAGIC = b"FVS1"
VERSION = 1


class FeatPrepError(Exception):
    """Unreadable input or a layout this tool does not recognize."""


def write_features(path, features):
    feats = np.ascontiguousarray(features, dtype="<f4")
    if feats.ndim != 2:
        raise FeatPrepError(f"features must be 2-d, got shape {feats.shape}")
    t, d = feats.shape
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<III", VERSION, t, d))
        fh.write(feats.tobytes(order="C"))


def write_sidecar(path, meta):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(meta, fh)
        fh.write("\n")


def read_sidecar(path):
    path = Path(path)
    if not path.is_file():
        raise FeatPrepError(f"sidecar not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def update_sidecar(path, **fields):
    meta = read_sidecar(path)
    meta.update(fields)
    write_sidecar(path, meta)
    return meta
