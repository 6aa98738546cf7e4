"""Quality metrics and test-time tone normalization."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .color import luma

_SSIM_WINDOW = 11
_SSIM_SIGMA = 1.5
_SSIM_K1 = 0.01
_SSIM_K2 = 0.03

_NORMALIZE_EPS = 1e-6


@dataclass(frozen=True)
class MetricReport:
    psnr: float  # math.inf flags a zero-MSE comparison
    ssim: float
    ref_means: tuple[float, float, float]
    ref_stds: tuple[float, float, float]

    def to_dict(self) -> dict:
        return {
            "psnr": None if math.isinf(self.psnr) else self.psnr,
            "psnr_infinite": math.isinf(self.psnr),
            "ssim": self.ssim,
            "ref_means": list(self.ref_means),
            "ref_stds": list(self.ref_stds),
        }


def _check_shapes(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")


def psnr(a: np.ndarray, b: np.ndarray, peak: float = 1.0) -> float:
    """10 log10(peak^2 / MSE); returns math.inf when MSE is zero."""
    _check_shapes(np.asarray(a), np.asarray(b))
    if peak <= 0:
        raise ValueError("peak must be > 0")
    diff = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)


def _ssim_window() -> np.ndarray:
    r = _SSIM_WINDOW // 2
    d = np.arange(-r, r + 1, dtype=np.float64)
    g = np.exp(-(d * d) / (2.0 * _SSIM_SIGMA**2))
    k = np.outer(g, g)
    return k / k.sum()


def ssim(a: np.ndarray, b: np.ndarray, dynamic_range: float = 1.0) -> float:
    """Mean local SSIM on the luma plane; 11x11 Gaussian window sigma 1.5,
    valid-window positions only."""
    a = np.asarray(a)
    b = np.asarray(b)
    _check_shapes(a, b)
    x = luma(a).astype(np.float64) if a.ndim == 3 else a.astype(np.float64)
    y = luma(b).astype(np.float64) if b.ndim == 3 else b.astype(np.float64)
    win = _ssim_window()
    r = _SSIM_WINDOW // 2

    def filt(z: np.ndarray) -> np.ndarray:
        return ndimage.correlate(z, win, mode="constant")[r:-r, r:-r]

    if x.shape[0] < _SSIM_WINDOW or x.shape[1] < _SSIM_WINDOW:
        raise ValueError(f"images smaller than the {_SSIM_WINDOW}x{_SSIM_WINDOW} SSIM window")

    mu_x = filt(x)
    mu_y = filt(y)
    xx = filt(x * x) - mu_x * mu_x
    yy = filt(y * y) - mu_y * mu_y
    xy = filt(x * y) - mu_x * mu_y
    c1 = (_SSIM_K1 * dynamic_range) ** 2
    c2 = (_SSIM_K2 * dynamic_range) ** 2
    s = ((2 * mu_x * mu_y + c1) * (2 * xy + c2)) / (
        (mu_x * mu_x + mu_y * mu_y + c1) * (xx + yy + c2)
    )
    return float(s.mean())


def tone_normalize(gt: np.ndarray, ref: np.ndarray, eps: float = _NORMALIZE_EPS) -> np.ndarray:
    """Affinely match gt's per-channel mean/std to ref's."""
    gt = np.asarray(gt, dtype=np.float64)
    ref = np.asarray(ref, dtype=np.float64)
    _check_shapes(gt, ref)
    out = np.empty_like(gt)
    for c in range(gt.shape[2]):
        sd = gt[:, :, c].std()
        if sd <= eps:
            raise ValueError(f"degenerate ground-truth channel {c}: std {sd:.3g} <= {eps}")
        out[:, :, c] = (gt[:, :, c] - gt[:, :, c].mean()) / sd * ref[:, :, c].std() + ref[
            :, :, c
        ].mean()
    return out.astype(np.float32)


def residual_autocorrelation(noisy: np.ndarray, clean: np.ndarray, lag: int = 1) -> float:
    """Pearson correlation between the residual and its horizontal shift
    by ``lag`` pixels, pooled over channels."""
    if lag < 0:
        raise ValueError("lag must be >= 0")
    noisy = np.asarray(noisy, dtype=np.float64)
    clean = np.asarray(clean, dtype=np.float64)
    _check_shapes(noisy, clean)
    r = noisy - clean
    if r.ndim == 2:
        r = r[:, :, None]
    if r.std() == 0:
        raise ValueError("zero-variance residual")
    if lag == 0:
        return 1.0
    a = r[:, :-lag, :].ravel()
    b = r[:, lag:, :].ravel()
    a = a - a.mean()
    b = b - b.mean()
    return float(np.sum(a * b) / math.sqrt(np.sum(a * a) * np.sum(b * b)))


def metric_report(
    output: np.ndarray,
    gt: np.ndarray,
    peak: float = 1.0,
    normalize: bool = True,
) -> MetricReport:
    """PSNR/SSIM of (optionally tone-normalized) gt against output."""
    ref = np.asarray(output, dtype=np.float64)
    g = tone_normalize(gt, ref) if normalize else np.asarray(gt, dtype=np.float64)
    means = tuple(float(ref[:, :, c].mean()) for c in range(3))
    stds = tuple(float(ref[:, :, c].std()) for c in range(3))
    return MetricReport(
        psnr=psnr(g, ref, peak=peak), ssim=ssim(g, ref), ref_means=means, ref_stds=stds
    )
