"""Pre-sensor degradation: exposure, motion blur, chromatic aberration,
sensor noise, and optional Bayer mosaicking.

Nothing here clamps: noise may drive values negative and exposure may
push them past 1; downstream stages are expected to cope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

BAYER_PATTERNS = ("RGGB", "BGGR", "GRBG", "GBRG")

# 2x2 CFA cell as channel indices (0=R, 1=G, 2=B), row-major.
_PATTERN_CELL = {
    "RGGB": ((0, 1), (1, 2)),
    "BGGR": ((2, 1), (1, 0)),
    "GRBG": ((1, 0), (2, 1)),
    "GBRG": ((1, 2), (0, 1)),
}

NOISE_MODES = ("shot-variance", "literal-multiplicative")


@dataclass(frozen=True)
class NoiseParams:
    """Read noise sigma plus the Poisson-motivated signal-dependent term."""

    gaussian_std: float = 0.0
    poisson_mult: float = 0.0
    mode: str = "shot-variance"

    def __post_init__(self):
        if self.gaussian_std < 0 or self.poisson_mult < 0:
            raise ValueError("noise parameters must be >= 0")
        if self.mode not in NOISE_MODES:
            raise ValueError(f"unknown noise mode {self.mode!r}")


@dataclass(frozen=True)
class BlurParams:
    length: float = 0.0
    angle: float = 0.0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("blur length must be >= 0")


@dataclass(frozen=True)
class AberrationParams:
    """Radial magnification of R and B relative to G."""

    red_scale: float = 1.0
    blue_scale: float = 1.0

    def __post_init__(self):
        for s in (self.red_scale, self.blue_scale):
            if not 0.9 <= s <= 1.1:
                raise ValueError(f"aberration scale {s} outside [0.9, 1.1]")


@dataclass(frozen=True)
class BayerMosaic:
    """Single-plane CFA raster with its pattern descriptor."""

    data: np.ndarray
    pattern: str = "RGGB"

    def __post_init__(self):
        if self.pattern not in BAYER_PATTERNS:
            raise ValueError(f"unknown Bayer pattern {self.pattern!r}")
        h, w = self.data.shape
        if h % 2 or w % 2:
            raise ValueError(f"mosaic dimensions must be even, got {h}x{w}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def channel_cell(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return _PATTERN_CELL[self.pattern]


def pattern_channel_map(pattern: str, h: int, w: int) -> np.ndarray:
    """(h, w) array of channel indices assigned by the CFA."""
    cell = np.array(_PATTERN_CELL[pattern], dtype=np.int8)
    return np.tile(cell, (h // 2 + 1, w // 2 + 1))[:h, :w]


def apply_exposure(img: np.ndarray, gain: float) -> np.ndarray:
    """Multiplicative exposure adjustment, unclamped."""
    if gain <= 0:
        raise ValueError(f"exposure gain must be > 0, got {gain}")
    return (np.asarray(img, dtype=np.float32) * np.float32(gain)).astype(np.float32)


def motion_blur_kernel(length: float, angle: float) -> np.ndarray:
    """Line point-spread-function: unit steps along the dominant axis with
    bilinear weighting across the perpendicular axis, normalized to sum 1."""
    n = max(1, int(round(length)))
    if n <= 1:
        return np.ones((1, 1), dtype=np.float64)
    c, s = math.cos(angle), math.sin(angle)
    # Step by one pixel along the dominant axis.
    if abs(c) >= abs(s):
        dx, dy = (1.0 if c >= 0 else -1.0), s / abs(c)
    else:
        dy, dx = (1.0 if s >= 0 else -1.0), c / abs(s)
    half = (n - 1) / 2.0
    pts = [((i - half) * dx, (i - half) * dy) for i in range(n)]
    r = int(math.ceil(max(max(abs(px), abs(py)) for px, py in pts))) + 1
    k = np.zeros((2 * r + 1, 2 * r + 1), dtype=np.float64)
    for px, py in pts:
        x0, y0 = math.floor(px), math.floor(py)
        fx, fy = px - x0, py - y0
        for ddy, wy in ((0, 1 - fy), (1, fy)):
            for ddx, wx in ((0, 1 - fx), (1, fx)):
                w = wx * wy
                if w > 0:
                    k[r + y0 + ddy, r + x0 + ddx] += w
    # Trim empty margins.
    ys, xs = np.nonzero(k)
    k = k[ys.min() : ys.max() + 1, xs.min() : xs.max() + 1]
    return k / k.sum()


def apply_motion_blur(img: np.ndarray, p: BlurParams) -> np.ndarray:
    """Convolve with the line PSF; mirror border; energy preserved."""
    k = motion_blur_kernel(p.length, p.angle)
    if k.size == 1:
        return np.asarray(img, dtype=np.float32)
    x = np.asarray(img, dtype=np.float64)
    out = np.empty_like(x)
    for c in range(x.shape[2]):
        out[:, :, c] = ndimage.convolve(x[:, :, c], k, mode="reflect")
    return out.astype(np.float32)


def apply_chromatic_aberration(img: np.ndarray, p: AberrationParams) -> np.ndarray:
    """Radially magnify R and B about the image center (bilinear sampling,
    edge clamp); G is untouched."""
    x = np.asarray(img, dtype=np.float32)
    out = x.copy()
    h, w = x.shape[:2]
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    yy, xx = np.meshgrid(np.arange(h, dtype=np.float64), np.arange(w, dtype=np.float64), indexing="ij")
    for chan, scale in ((0, p.red_scale), (2, p.blue_scale)):
        if scale == 1.0:
            continue
        sy = cy + (yy - cy) / scale
        sx = cx + (xx - cx) / scale
        out[:, :, chan] = _bilinear_sample(x[:, :, chan], sy, sx)
    return out


def _bilinear_sample(plane: np.ndarray, sy: np.ndarray, sx: np.ndarray) -> np.ndarray:
    h, w = plane.shape
    sy = np.clip(sy, 0, h - 1)
    sx = np.clip(sx, 0, w - 1)
    y0 = np.floor(sy).astype(np.intp)
    x0 = np.floor(sx).astype(np.intp)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    fy = sy - y0
    fx = sx - x0
    p = plane.astype(np.float64)
    top = p[y0, x0] * (1 - fx) + p[y0, x1] * fx
    bot = p[y1, x0] * (1 - fx) + p[y1, x1] * fx
    return (top * (1 - fy) + bot * fy).astype(np.float32)


def add_noise(img: np.ndarray, p: NoiseParams, rng: np.random.Generator) -> np.ndarray:
    """Inject sensor noise, i.i.d. per sample, deterministic given the
    generator seed.

    shot-variance mode: y = x + N(0, gaussian_std^2 + poisson_mult * max(x, 0)),
    the heteroscedastic Gaussian approximation of photon noise.
    literal-multiplicative: y = x * (1 + N(0, poisson_mult)) + N(0, gaussian_std^2).
    """
    x = np.asarray(img, dtype=np.float32)
    if p.gaussian_std == 0 and p.poisson_mult == 0:
        return x
    if p.mode == "shot-variance":
        var = p.gaussian_std**2 + p.poisson_mult * np.maximum(x, 0.0)
        eps = rng.standard_normal(x.shape, dtype=np.float32)
        return (x + np.sqrt(var, dtype=np.float32) * eps).astype(np.float32)
    eta = rng.standard_normal(x.shape, dtype=np.float32) * np.float32(math.sqrt(p.poisson_mult))
    delta = rng.standard_normal(x.shape, dtype=np.float32) * np.float32(p.gaussian_std)
    return (x * (1.0 + eta) + delta).astype(np.float32)


def mosaick(img: np.ndarray, pattern: str = "RGGB") -> BayerMosaic:
    """Sample the CFA-assigned channel at every site; lossless there."""
    if pattern not in BAYER_PATTERNS:
        raise ValueError(f"unknown Bayer pattern {pattern!r}")
    x = np.asarray(img, dtype=np.float32)
    h, w = x.shape[:2]
    if h % 2 or w % 2:
        raise ValueError(f"mosaicking needs even dimensions, got {h}x{w}")
    chan = pattern_channel_map(pattern, h, w)
    data = np.take_along_axis(x, chan[:, :, None].astype(np.intp), axis=2)[:, :, 0]
    return BayerMosaic(data=np.ascontiguousarray(data), pattern=pattern)
