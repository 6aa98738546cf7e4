"""Shared fixtures: natural photographs (linear light) and detail-rich
crops selected by gradient energy, which is where demosaicker quality
differences actually show."""

from __future__ import annotations

import numpy as np
import pytest
import skimage.data

from rawpipe.color import srgb_to_linear

_SCENES = ("astronaut", "coffee", "chelsea", "rocket", "cat", "hubble_deep_field", "retina")


@pytest.fixture(scope="session")
def natural_images() -> list[np.ndarray]:
    """Linear-light float32 versions of the bundled sample photographs."""
    out = []
    for name in _SCENES:
        u8 = getattr(skimage.data, name)()
        out.append(srgb_to_linear(u8.astype(np.float32) / 255.0))
    return out


def gradient_energy(img: np.ndarray) -> float:
    return float(np.abs(np.diff(img, axis=0)).mean() + np.abs(np.diff(img, axis=1)).mean())


def detail_crops(images: list[np.ndarray], n: int, size: int, seed: int = 7) -> list[np.ndarray]:
    """Top-``n`` crops by gradient energy out of 30 random candidates per
    image; flat crops make every demosaicker look alike."""
    rng = np.random.default_rng(seed)
    candidates = []
    for img in images:
        h, w = img.shape[:2]
        if h < size or w < size:
            continue
        for _ in range(30):
            top = int(rng.integers(0, h - size + 1))
            left = int(rng.integers(0, w - size + 1))
            c = np.ascontiguousarray(img[top : top + size, left : left + size])
            candidates.append((gradient_energy(c), len(candidates), c))
    candidates.sort(key=lambda t: (-t[0], t[1]))
    return [c for _, _, c in candidates[:n]]


@pytest.fixture(scope="session")
def detail_crops_128(natural_images) -> list[np.ndarray]:
    return detail_crops(natural_images, n=20, size=128)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20260824)
