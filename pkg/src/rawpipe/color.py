"""Color transfer curves and the luma/chroma basis shared by every stage.

Working images are float32 arrays of shape (H, W, 3) in linear light.
Gamma-encoded (display-space) images use the same layout with values in
[0, 1].
"""

from __future__ import annotations

import numpy as np

# BT.601 luma weights; chroma is (B - Y, R - Y).
LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114], dtype=np.float64)

_SRGB_A = 0.055
_SRGB_GAMMA = 2.4
_SRGB_LINEAR_SLOPE = 12.92
_SRGB_LINEAR_CUT = 0.04045
_SRGB_LINEAR_CUT_INV = 0.0031308


def srgb_to_linear(img: np.ndarray, pure_gamma: float | None = None) -> np.ndarray:
    """Decode gamma-encoded values in [0, 1] to linear light.

    Uses the piecewise sRGB curve by default; pass ``pure_gamma`` to use a
    plain power law instead. Out-of-range input is rejected.
    """
    img = np.asarray(img)
    if img.size and (img.min() < 0.0 or img.max() > 1.0):
        raise ValueError(
            f"srgb values must lie in [0, 1], got range "
            f"[{img.min():.6g}, {img.max():.6g}]"
        )
    x = img.astype(np.float64)
    if pure_gamma is not None:
        out = np.power(x, pure_gamma)
    else:
        out = np.where(
            x <= _SRGB_LINEAR_CUT,
            x / _SRGB_LINEAR_SLOPE,
            np.power((x + _SRGB_A) / (1.0 + _SRGB_A), _SRGB_GAMMA),
        )
    return out.astype(np.float32)


def linear_to_srgb(img: np.ndarray, pure_gamma: float | None = None) -> np.ndarray:
    """Encode linear values to display space; input is clamped to [0, 1]."""
    x = np.clip(np.asarray(img, dtype=np.float64), 0.0, 1.0)
    if pure_gamma is not None:
        out = np.power(x, 1.0 / pure_gamma)
    else:
        out = np.where(
            x <= _SRGB_LINEAR_CUT_INV,
            x * _SRGB_LINEAR_SLOPE,
            (1.0 + _SRGB_A) * np.power(x, 1.0 / _SRGB_GAMMA) - _SRGB_A,
        )
    return out.astype(np.float32)


def luma(img: np.ndarray) -> np.ndarray:
    """BT.601 luma plane of an (H, W, 3) image, float32."""
    x = np.asarray(img, dtype=np.float64)
    y = x[..., 0] * LUMA_WEIGHTS[0] + x[..., 1] * LUMA_WEIGHTS[1] + x[..., 2] * LUMA_WEIGHTS[2]
    return y.astype(np.float32)


def rgb_to_luma_chroma(img: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split an RGB image into (luma, B - luma, R - luma) planes."""
    x = np.asarray(img, dtype=np.float64)
    y = x[..., 0] * LUMA_WEIGHTS[0] + x[..., 1] * LUMA_WEIGHTS[1] + x[..., 2] * LUMA_WEIGHTS[2]
    cb = x[..., 2] - y
    cr = x[..., 0] - y
    return y.astype(np.float32), cb.astype(np.float32), cr.astype(np.float32)


def luma_chroma_to_rgb(y: np.ndarray, cb: np.ndarray, cr: np.ndarray) -> np.ndarray:
    """Exact inverse of :func:`rgb_to_luma_chroma`."""
    y64 = np.asarray(y, dtype=np.float64)
    b = np.asarray(cb, dtype=np.float64) + y64
    r = np.asarray(cr, dtype=np.float64) + y64
    g = (y64 - LUMA_WEIGHTS[0] * r - LUMA_WEIGHTS[2] * b) / LUMA_WEIGHTS[1]
    return np.stack([r, g, b], axis=-1).astype(np.float32)
