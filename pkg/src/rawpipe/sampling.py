"""Resampling and patch extraction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PatchSpec:
    """A square crop fully inside its source image."""

    source_id: str
    top: int
    left: int
    size: int


def downsample(img: np.ndarray, factor: int) -> np.ndarray:
    """Box-average over factor x factor blocks; trailing remainder cropped.

    Box averaging is exactly mean-preserving, which keeps clean/degraded
    pairs statistically comparable.
    """
    if factor < 1:
        raise ValueError(f"downsample factor must be >= 1, got {factor}")
    if factor == 1:
        return np.asarray(img, dtype=np.float32)
    x = np.asarray(img, dtype=np.float64)
    h = (x.shape[0] // factor) * factor
    w = (x.shape[1] // factor) * factor
    x = x[:h, :w]
    x = x.reshape(h // factor, factor, w // factor, factor, -1)
    out = x.mean(axis=(1, 3))
    if img.ndim == 2:
        out = out[..., 0]
    return out.astype(np.float32)


def upsample_replicate(img: np.ndarray, factor: int) -> np.ndarray:
    """Nearest-neighbor upsample; inverse partner of :func:`downsample`
    for per-block mean checks."""
    if factor < 1:
        raise ValueError(f"upsample factor must be >= 1, got {factor}")
    return np.repeat(np.repeat(img, factor, axis=0), factor, axis=1)


def crop(img: np.ndarray, spec: PatchSpec) -> np.ndarray:
    h, w = img.shape[:2]
    if spec.top < 0 or spec.left < 0 or spec.top + spec.size > h or spec.left + spec.size > w:
        raise ValueError(f"patch {spec} outside {h}x{w} image")
    return img[spec.top : spec.top + spec.size, spec.left : spec.left + spec.size]


def extract_patches(
    img: np.ndarray,
    n: int,
    size: int,
    rng: np.random.Generator,
    source_id: str = "",
) -> list[tuple[PatchSpec, np.ndarray]]:
    """Draw ``n`` uniformly located, fully in-bounds square crops.

    Deterministic given the generator's seed.
    """
    h, w = img.shape[:2]
    if h < size or w < size:
        raise ValueError(f"image {h}x{w} smaller than patch size {size}")
    out = []
    for _ in range(n):
        top = int(rng.integers(0, h - size + 1))
        left = int(rng.integers(0, w - size + 1))
        spec = PatchSpec(source_id=source_id, top=top, left=left, size=size)
        out.append((spec, np.ascontiguousarray(crop(img, spec))))
    return out
