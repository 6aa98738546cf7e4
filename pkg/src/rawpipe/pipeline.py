"""End-to-end execution of the four degradation stages."""

from __future__ import annotations

import numpy as np

from . import artifacts as art
from .config import PipelineConfig
from .demosaic import correct_defective_pixels, demosaic, white_balance
from .denoise import run_denoise_chain
from .postprocess import run_postprocess
from .rng import STREAM_NOISE, derive_rng


def run_pipeline(img: np.ndarray, cfg: PipelineConfig) -> np.ndarray:
    """Degrade a linear (H, W, 3) image per the config.

    Pure function of (image, config): the only randomness is the noise
    substream derived from cfg.seed. Output dimensions equal input
    dimensions.
    """
    x = np.asarray(img, dtype=np.float32)
    if x.ndim != 3 or x.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) image, got shape {x.shape}")
    h, w = x.shape[:2]
    if cfg.mosaick and (h % 2 or w % 2):
        raise ValueError(f"mosaicking needs even dimensions, got {h}x{w}")

    mosaic = None
    if cfg.artifacts:
        if cfg.exposure_gain != 1.0:
            x = art.apply_exposure(x, cfg.exposure_gain)
        if cfg.blur.length > 1.0:
            x = art.apply_motion_blur(x, cfg.blur)
        if cfg.aberration.red_scale != 1.0 or cfg.aberration.blue_scale != 1.0:
            x = art.apply_chromatic_aberration(x, cfg.aberration)

    if cfg.mosaick:
        mosaic = art.mosaick(x, cfg.bayer_pattern)

    if cfg.artifacts and (cfg.noise.gaussian_std > 0 or cfg.noise.poisson_mult > 0):
        rng = derive_rng(cfg.seed, STREAM_NOISE)
        if mosaic is not None:
            # Noise goes in after mosaicking so each CFA sample is
            # corrupted independently, like a real sensor readout.
            noisy = art.add_noise(mosaic.data, cfg.noise, rng)
            mosaic = art.BayerMosaic(data=noisy, pattern=mosaic.pattern)
        else:
            x = art.add_noise(x, cfg.noise, rng)

    if mosaic is not None:
        if cfg.defect_threshold is not None:
            mosaic = correct_defective_pixels(mosaic, cfg.defect_threshold)
        wb = cfg.white_balance
        if (wb.r_gain, wb.g_gain, wb.b_gain) != (1.0, 1.0, 1.0):
            mosaic = white_balance(mosaic, wb)
        x = demosaic(mosaic, cfg.demosaic_method)

    if cfg.denoise:
        x = run_denoise_chain(x, cfg.denoise_chain)

    if cfg.postprocess:
        x = run_postprocess(x, cfg.post)

    assert x.shape == (h, w, 3)
    return np.asarray(x, dtype=np.float32)
