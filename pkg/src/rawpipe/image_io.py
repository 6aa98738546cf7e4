"""File I/O: 8-bit PNG/JPEG and 16-bit PNG in, 8-bit PNG and the RPF1
raw-float container out.

RPF1 layout: magic ``RPF1``, then height/width/channels as little-endian
uint32, then row-major little-endian float32 samples.
"""

from __future__ import annotations

import struct
from pathlib import Path

import cv2
import numpy as np

_MAGIC = b"RPF1"


def load_srgb(path: str | Path) -> np.ndarray:
    """Read an 8-bit PNG/JPEG or 16-bit PNG as float32 display-space RGB
    in [0, 1]."""
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise IOError(f"cannot read image: {path}")
    if raw.ndim == 2:
        raw = raw[:, :, None].repeat(3, axis=2)
    if raw.shape[2] == 4:
        raw = raw[:, :, :3]
    raw = raw[:, :, ::-1]  # BGR -> RGB
    if raw.dtype == np.uint8:
        return (raw.astype(np.float32) / 255.0).copy()
    if raw.dtype == np.uint16:
        return (raw.astype(np.float32) / 65535.0).copy()
    raise IOError(f"unsupported sample type {raw.dtype} in {path}")


def save_png8(path: str | Path, srgb: np.ndarray) -> None:
    """Write display-space values in [0, 1] as an 8-bit PNG."""
    x = np.clip(np.asarray(srgb, dtype=np.float64), 0.0, 1.0)
    u8 = np.rint(x * 255.0).astype(np.uint8)
    if u8.ndim == 3:
        u8 = u8[:, :, ::-1]  # RGB -> BGR
    if not cv2.imwrite(str(path), u8):
        raise IOError(f"cannot write image: {path}")


def save_rpf(path: str | Path, img: np.ndarray) -> None:
    """Write a float raster to the RPF1 container."""
    x = np.asarray(img, dtype=np.float32)
    if x.ndim == 2:
        x = x[:, :, None]
    h, w, c = x.shape
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<III", h, w, c))
        f.write(np.ascontiguousarray(x).astype("<f4").tobytes())


def load_rpf(path: str | Path) -> np.ndarray:
    """Read an RPF1 container back as float32; single-channel rasters come
    back 2-D."""
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != _MAGIC:
            raise IOError(f"not an RPF1 file: {path}")
        h, w, c = struct.unpack("<III", f.read(12))
        data = np.frombuffer(f.read(h * w * c * 4), dtype="<f4")
    if data.size != h * w * c:
        raise IOError(f"truncated RPF1 file: {path}")
    out = data.reshape(h, w, c).astype(np.float32)
    return out[:, :, 0] if c == 1 else out
