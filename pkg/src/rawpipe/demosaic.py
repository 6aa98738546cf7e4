"""Mosaic-domain corrections and demosaicking.

Defective-pixel correction and white balance run on the mosaic; the three
demosaickers (bilinear, Kodak gradient-directed, AHD) reconstruct full
RGB. All demosaickers pass mosaic values through bit-for-bit at sampled
sites and use mirror (odd reflection) borders, which preserves CFA phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .artifacts import BayerMosaic, pattern_channel_map

DEMOSAIC_METHODS = ("bilinear", "kodak", "ahd")

# Same-color neighbor offsets used by defective-pixel correction.
_RB_NEIGHBORS = ((-2, -2), (-2, 0), (-2, 2), (0, -2), (0, 2), (2, -2), (2, 0), (2, 2))
_G_NEIGHBORS = ((-1, -1), (-1, 1), (1, -1), (1, 1), (0, -2), (0, 2), (-2, 0), (2, 0))


@dataclass(frozen=True)
class WhiteBalanceGains:
    r_gain: float = 1.0
    g_gain: float = 1.0
    b_gain: float = 1.0

    def __post_init__(self):
        if self.r_gain <= 0 or self.g_gain <= 0 or self.b_gain <= 0:
            raise ValueError("white balance gains must be > 0")


def _r_parity(mosaic: BayerMosaic) -> tuple[int, int]:
    cell = mosaic.channel_cell()
    for dy in range(2):
        for dx in range(2):
            if cell[dy][dx] == 0:
                return dy, dx
    raise AssertionError("pattern without R site")


def correct_defective_pixels(mosaic: BayerMosaic, threshold: float) -> BayerMosaic:
    """Replace any site deviating from the median of its 8 same-color
    neighbors by more than ``threshold`` with that median."""
    if not threshold > 0:
        raise ValueError(f"defect threshold must be > 0, got {threshold}")
    x = mosaic.data.astype(np.float64)
    h, w = x.shape
    padded = np.pad(x, 2, mode="reflect")

    def neighbor_median(offsets) -> np.ndarray:
        stack = np.stack(
            [padded[2 + dy : 2 + dy + h, 2 + dx : 2 + dx + w] for dy, dx in offsets],
            axis=0,
        )
        stack.sort(axis=0)
        return (stack[3] + stack[4]) * 0.5

    chan = pattern_channel_map(mosaic.pattern, h, w)
    med = np.where(chan == 1, neighbor_median(_G_NEIGHBORS), neighbor_median(_RB_NEIGHBORS))
    fixed = np.where(np.abs(x - med) > threshold, med, x).astype(np.float32)
    # Untouched sites keep their original float32 bits.
    fixed = np.where(np.abs(x - med) > threshold, fixed, mosaic.data)
    return BayerMosaic(data=np.ascontiguousarray(fixed), pattern=mosaic.pattern)


def white_balance(mosaic: BayerMosaic, gains: WhiteBalanceGains) -> BayerMosaic:
    """Multiply every site by the gain of its CFA channel."""
    h, w = mosaic.shape
    chan = pattern_channel_map(mosaic.pattern, h, w)
    g = np.array([gains.r_gain, gains.g_gain, gains.b_gain], dtype=np.float32)
    out = (mosaic.data * g[chan]).astype(np.float32)
    return BayerMosaic(data=np.ascontiguousarray(out), pattern=mosaic.pattern)


def _impose_sampled_sites(out: np.ndarray, mosaic: BayerMosaic) -> np.ndarray:
    h, w = mosaic.shape
    chan = pattern_channel_map(mosaic.pattern, h, w)
    for c in range(3):
        m = chan == c
        out[:, :, c][m] = mosaic.data[m]
    return out


def demosaic_bilinear(mosaic: BayerMosaic) -> np.ndarray:
    """Nearest same-channel neighbor averaging (the standard 3x3 kernels)."""
    ry, rx = _r_parity(mosaic)
    padded = np.pad(mosaic.data.astype(np.float64), 2, mode="reflect")
    out = _kernels.bilinear_demosaic_padded(padded, ry, rx).astype(np.float32)
    return _impose_sampled_sites(out, mosaic)


def demosaic_kodak(mosaic: BayerMosaic) -> np.ndarray:
    """Gradient-directed green interpolation with color-difference chroma."""
    ry, rx = _r_parity(mosaic)
    padded = np.pad(mosaic.data.astype(np.float64), 2, mode="reflect")
    out = _kernels.kodak_demosaic_padded(padded, ry, rx).astype(np.float32)
    return _impose_sampled_sites(out, mosaic)


def demosaic(mosaic: BayerMosaic, method: str = "bilinear", **kwargs) -> np.ndarray:
    if method == "bilinear":
        return demosaic_bilinear(mosaic)
    if method == "kodak":
        return demosaic_kodak(mosaic)
    if method == "ahd":
        from .ahd import demosaic_ahd

        return demosaic_ahd(mosaic, **kwargs)
    raise ValueError(f"unknown demosaic method {method!r}")
