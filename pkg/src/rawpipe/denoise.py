"""On-camera denoising: optional pre-tonemap, then a reorderable chain of
bilateral, median, and wavelet-coring filters.

Filters never assume [0, 1] input; post-noise values can be negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .color import luma, luma_chroma_to_rgb, rgb_to_luma_chroma
from .tone import ToneCurve, apply_tone_curve, invert_tone_curve

MEDIAN_TARGETS = ("per-channel", "luma-only")


@dataclass(frozen=True)
class BilateralParams:
    sigma_spatial: float
    sigma_range: float
    radius: int

    def __post_init__(self):
        if self.sigma_spatial <= 0 or self.sigma_range <= 0:
            raise ValueError("bilateral sigmas must be > 0")
        if self.radius < 1:
            raise ValueError("bilateral radius must be >= 1")


@dataclass(frozen=True)
class MedianParams:
    window: int
    target: str = "per-channel"

    def __post_init__(self):
        if self.window < 1 or self.window % 2 == 0:
            raise ValueError(f"median window must be odd >= 1, got {self.window}")
        if self.target not in MEDIAN_TARGETS:
            raise ValueError(f"unknown median target {self.target!r}")


@dataclass(frozen=True)
class WaveletParams:
    threshold: float
    levels: int = 2

    def __post_init__(self):
        if self.threshold < 0:
            raise ValueError("wavelet threshold must be >= 0")
        if self.levels < 1:
            raise ValueError("wavelet levels must be >= 1")


DenoiseStep = BilateralParams | MedianParams | WaveletParams


@dataclass(frozen=True)
class DenoiseChain:
    pre_tonemap: ToneCurve = field(default_factory=ToneCurve)
    invert_pre_tonemap_after: bool = False
    steps: tuple[DenoiseStep, ...] = ()

    def __post_init__(self):
        kinds = [type(s) for s in self.steps]
        if len(kinds) != len(set(kinds)):
            raise ValueError("each denoise step type may appear at most once")


def bilateral_filter(
    img: np.ndarray, sigma_spatial: float, sigma_range: float, radius: int
) -> np.ndarray:
    """Bilateral filter guided by the luma plane, applied to all channels;
    mirror border; per-pixel weight normalization."""
    p = BilateralParams(sigma_spatial, sigma_range, radius)
    x = np.asarray(img, dtype=np.float64)
    guide = luma(x.astype(np.float32)).astype(np.float64)
    r = p.radius
    d = np.arange(-r, r + 1, dtype=np.float64)
    dy, dx = np.meshgrid(d, d, indexing="ij")
    spatial = np.exp(-(dy * dy + dx * dx) / (2.0 * p.sigma_spatial**2))
    padded = np.pad(x, ((r, r), (r, r), (0, 0)), mode="reflect")
    guide_p = np.pad(guide, r, mode="reflect")
    out = _kernels.bilateral_filter_padded(
        np.ascontiguousarray(padded),
        np.ascontiguousarray(guide_p),
        spatial,
        1.0 / (2.0 * p.sigma_range**2),
    )
    return np.asarray(out, dtype=np.float32)


def median_filter(img: np.ndarray, window: int, target: str = "per-channel") -> np.ndarray:
    """window x window median, per channel or on luma with chroma
    passthrough; mirror border."""
    p = MedianParams(window, target)
    x = np.asarray(img, dtype=np.float32)
    if p.window == 1:
        return x
    r = p.window // 2
    if p.target == "per-channel":
        out = np.empty(x.shape, dtype=np.float64)
        for c in range(3):
            padded = np.pad(x[:, :, c].astype(np.float64), r, mode="reflect")
            out[:, :, c] = _kernels.median_filter_padded(np.ascontiguousarray(padded), p.window)
        return out.astype(np.float32)
    y, cb, cr = rgb_to_luma_chroma(x)
    padded = np.pad(y.astype(np.float64), r, mode="reflect")
    y2 = np.asarray(
        _kernels.median_filter_padded(np.ascontiguousarray(padded), p.window), dtype=np.float32
    )
    return luma_chroma_to_rgb(y2, cb, cr)


def _haar_fwd(a: np.ndarray, axis: int) -> np.ndarray:
    s = np.moveaxis(a, axis, 0)
    even, odd = s[0::2], s[1::2]
    lo = (even + odd) / math.sqrt(2.0)
    hi = (even - odd) / math.sqrt(2.0)
    return np.moveaxis(np.concatenate([lo, hi], axis=0), 0, axis)


def _haar_inv(a: np.ndarray, axis: int) -> np.ndarray:
    s = np.moveaxis(a, axis, 0)
    n = s.shape[0] // 2
    lo, hi = s[:n], s[n:]
    even = (lo + hi) / math.sqrt(2.0)
    odd = (lo - hi) / math.sqrt(2.0)
    out = np.empty_like(s)
    out[0::2], out[1::2] = even, odd
    return np.moveaxis(out, 0, axis)


def wavelet_core(img: np.ndarray, threshold: float, levels: int = 2) -> np.ndarray:
    """Orthonormal Haar multilevel transform per channel with soft
    thresholding of every detail band; mirror-pads when dimensions are not
    divisible by 2^levels."""
    p = WaveletParams(threshold, levels)
    x = np.asarray(img, dtype=np.float64)
    h, w = x.shape[:2]
    block = 2**p.levels
    ph = (-h) % block
    pw = (-w) % block
    if ph or pw:
        x = np.pad(x, ((0, ph), (0, pw), (0, 0)), mode="reflect")

    hh, ww = x.shape[:2]
    coeffs = x.copy()
    sizes = []
    ch, cw = hh, ww
    for _ in range(p.levels):
        band = coeffs[:ch, :cw].copy()
        band = _haar_fwd(band, 0)
        band = _haar_fwd(band, 1)
        coeffs[:ch, :cw] = band
        sizes.append((ch, cw))
        ch //= 2
        cw //= 2

    if p.threshold > 0:
        # Soft-shrink everything outside the final approximation band.
        mask = np.ones((hh, ww), dtype=bool)
        mask[:ch, :cw] = False
        detail = coeffs[mask]
        coeffs[mask] = np.sign(detail) * np.maximum(np.abs(detail) - p.threshold, 0.0)

    for ch, cw in reversed(sizes):
        band = coeffs[:ch, :cw].copy()
        band = _haar_inv(band, 1)
        band = _haar_inv(band, 0)
        coeffs[:ch, :cw] = band

    return coeffs[:h, :w].astype(np.float32)


def apply_step(img: np.ndarray, step: DenoiseStep) -> np.ndarray:
    if isinstance(step, BilateralParams):
        return bilateral_filter(img, step.sigma_spatial, step.sigma_range, step.radius)
    if isinstance(step, MedianParams):
        return median_filter(img, step.window, step.target)
    if isinstance(step, WaveletParams):
        return wavelet_core(img, step.threshold, step.levels)
    raise TypeError(f"unknown denoise step {step!r}")


def run_denoise_chain(img: np.ndarray, chain: DenoiseChain) -> np.ndarray:
    """Pre-tonemap (if any), steps in listed order, optional inverse of
    the pre-tonemap. Deterministic; no randomness in this module."""
    out = apply_tone_curve(img, chain.pre_tonemap)
    for step in chain.steps:
        out = apply_step(out, step)
    if chain.invert_pre_tonemap_after:
        out = invert_tone_curve(out, chain.pre_tonemap)
    return np.asarray(out, dtype=np.float32)
