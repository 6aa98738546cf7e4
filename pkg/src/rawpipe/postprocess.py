"""Aesthetic finishing: saturation, tone curve, unsharp mask, JPEG
round-trip.

The tonemap is the pipeline's designated clamp point: values are clipped
to [0, 1] there before any display-space operation.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image
from scipy import ndimage

from .color import linear_to_srgb, luma, srgb_to_linear
from .tone import ToneCurve, apply_tone_curve


@dataclass(frozen=True)
class UnsharpParams:
    amount: float = 0.0
    radius: float = 1.0
    threshold: float = 0.0

    def __post_init__(self):
        if self.amount < 0:
            raise ValueError("unsharp amount must be >= 0")
        if self.radius <= 0:
            raise ValueError("unsharp radius must be > 0")


@dataclass(frozen=True)
class PostParams:
    saturation: float = 1.0
    tone_curve: ToneCurve = field(default_factory=ToneCurve)
    unsharp: UnsharpParams = field(default_factory=UnsharpParams)
    jpeg_quality: int | None = None  # None disables compression

    def __post_init__(self):
        if self.saturation < 0:
            raise ValueError("saturation must be >= 0")
        if self.jpeg_quality is not None and not 1 <= self.jpeg_quality <= 100:
            raise ValueError(f"jpeg quality must lie in [1, 100], got {self.jpeg_quality}")


def adjust_saturation(img: np.ndarray, s: float) -> np.ndarray:
    """out = luma + s * (rgb - luma); luma itself is preserved exactly."""
    if s < 0:
        raise ValueError("saturation must be >= 0")
    x = np.asarray(img, dtype=np.float64)
    y = luma(x.astype(np.float32)).astype(np.float64)[..., None]
    return (y + s * (x - y)).astype(np.float32)


def tonemap(img: np.ndarray, curve: ToneCurve) -> np.ndarray:
    """Clamp to [0, 1], then apply the curve."""
    x = np.clip(np.asarray(img, dtype=np.float32), 0.0, 1.0)
    return apply_tone_curve(x, curve)


def gaussian_blur(img: np.ndarray, sigma: float) -> np.ndarray:
    x = np.asarray(img, dtype=np.float64)
    out = np.empty_like(x)
    for c in range(x.shape[2]):
        out[:, :, c] = ndimage.gaussian_filter(x[:, :, c], sigma, mode="reflect")
    return out.astype(np.float32)


def unsharp_mask(img: np.ndarray, amount: float, radius: float, threshold: float = 0.0) -> np.ndarray:
    """out = img + amount * h(img - blur), where h zeroes differences
    whose magnitude is below ``threshold``."""
    p = UnsharpParams(amount, radius, threshold)
    if p.amount == 0:
        return np.asarray(img, dtype=np.float32)
    x = np.asarray(img, dtype=np.float64)
    high = x - gaussian_blur(x, p.radius).astype(np.float64)
    if p.threshold > 0:
        high = np.where(np.abs(high) < p.threshold, 0.0, high)
    return (x + p.amount * high).astype(np.float32)


def jpeg_roundtrip(
    img: np.ndarray,
    quality: int,
    chroma_subsampling: str = "420",
    debug_path: str | Path | None = None,
) -> np.ndarray:
    """Encode-decode through a baseline JFIF codec and return to linear.

    The image is clamped, gamma-encoded, and quantized to 8 bits before
    encoding; artifacts (not bit-exact files) are the product.
    """
    if not 1 <= int(quality) <= 100:
        raise ValueError(f"jpeg quality must lie in [1, 100], got {quality}")
    if chroma_subsampling not in ("420", "444"):
        raise ValueError(f"unsupported chroma subsampling {chroma_subsampling!r}")
    srgb = linear_to_srgb(img)
    u8 = np.rint(np.clip(srgb, 0.0, 1.0) * 255.0).astype(np.uint8)
    pil = Image.fromarray(u8, mode="RGB")
    subsampling = 2 if chroma_subsampling == "420" else 0
    buf = io.BytesIO()
    pil.save(buf, format="JPEG", quality=int(quality), subsampling=subsampling)
    if debug_path is not None:
        Path(debug_path).write_bytes(buf.getvalue())
    buf.seek(0)
    decoded = np.asarray(Image.open(buf).convert("RGB"), dtype=np.float32) / 255.0
    return srgb_to_linear(decoded)


def run_postprocess(img: np.ndarray, params: PostParams) -> np.ndarray:
    """Fixed order: saturation -> tonemap (clamp) -> unsharp -> JPEG."""
    out = adjust_saturation(img, params.saturation)
    out = tonemap(out, params.tone_curve)
    if params.unsharp.amount > 0:
        out = unsharp_mask(
            out, params.unsharp.amount, params.unsharp.radius, params.unsharp.threshold
        )
    if params.jpeg_quality is not None:
        out = jpeg_roundtrip(out, params.jpeg_quality)
    return out
