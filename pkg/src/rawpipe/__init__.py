"""Camera ISP simulation toolkit: degrade clean linear images through a
configurable sensor/ISP pipeline to produce paired training data, plus
the metrics and parameter-fitting tools to match it to real cameras."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .artifacts import (
    AberrationParams,
    BayerMosaic,
    BlurParams,
    NoiseParams,
    add_noise,
    apply_chromatic_aberration,
    apply_exposure,
    apply_motion_blur,
    mosaick,
)
from .color import linear_to_srgb, rgb_to_luma_chroma, srgb_to_linear
from .config import (
    ParamRanges,
    PipelineConfig,
    ablation,
    config_from_json,
    config_to_json,
    preset,
    sample_params,
)
from .demosaic import WhiteBalanceGains, correct_defective_pixels, demosaic, white_balance
from .denoise import (
    BilateralParams,
    DenoiseChain,
    MedianParams,
    WaveletParams,
    bilateral_filter,
    median_filter,
    run_denoise_chain,
    wavelet_core,
)
from .fit import FitResult, FitSpace, grid_search_fit, luma_chroma_loss, refine_fit
from .metrics import psnr, residual_autocorrelation, ssim, tone_normalize
from .pipeline import run_pipeline
from .postprocess import PostParams, adjust_saturation, jpeg_roundtrip, tonemap, unsharp_mask
from .sampling import PatchSpec, downsample, extract_patches
from .tone import ToneCurve
