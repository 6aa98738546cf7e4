"""Pointwise tone curves shared by the denoise pre-tonemap and the
post-processing tonemap.

Curves are monotone and fix 0 and 1. Inputs may fall outside [0, 1]
mid-pipeline: gamma extends sign-symmetrically, the s-curve extends with
identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CURVE_KINDS = ("none", "gamma", "s-curve")


@dataclass(frozen=True)
class ToneCurve:
    kind: str = "none"
    gamma: float = 1.0
    strength: float = 0.0

    def __post_init__(self):
        if self.kind not in CURVE_KINDS:
            raise ValueError(f"unknown tone curve kind {self.kind!r}")
        if self.kind == "gamma" and not 1.0 <= self.gamma <= 3.0:
            raise ValueError(f"gamma must lie in [1, 3], got {self.gamma}")
        if self.kind == "s-curve" and not 0.0 <= self.strength <= 1.0:
            raise ValueError(f"s-curve strength must lie in [0, 1], got {self.strength}")

    @property
    def is_identity(self) -> bool:
        return (
            self.kind == "none"
            or (self.kind == "gamma" and self.gamma == 1.0)
            or (self.kind == "s-curve" and self.strength == 0.0)
        )


def _s_blend(x: np.ndarray, strength: float) -> np.ndarray:
    s = x * x * (3.0 - 2.0 * x)
    blended = (1.0 - strength) * x + strength * s
    return np.where((x >= 0.0) & (x <= 1.0), blended, x)


def apply_tone_curve(img: np.ndarray, curve: ToneCurve) -> np.ndarray:
    x = np.asarray(img, dtype=np.float64)
    if curve.is_identity:
        return x.astype(np.float32)
    if curve.kind == "gamma":
        out = np.sign(x) * np.power(np.abs(x), 1.0 / curve.gamma)
    else:
        out = _s_blend(x, curve.strength)
    return out.astype(np.float32)


def invert_tone_curve(img: np.ndarray, curve: ToneCurve) -> np.ndarray:
    """Inverse map; the s-curve branch inverts via a dense monotone LUT."""
    x = np.asarray(img, dtype=np.float64)
    if curve.is_identity:
        return x.astype(np.float32)
    if curve.kind == "gamma":
        out = np.sign(x) * np.power(np.abs(x), curve.gamma)
    else:
        grid = np.linspace(0.0, 1.0, 4097)
        fwd = _s_blend(grid, curve.strength)
        inside = (x >= 0.0) & (x <= 1.0)
        out = np.where(inside, np.interp(np.clip(x, 0.0, 1.0), fwd, grid), x)
    return out.astype(np.float32)
