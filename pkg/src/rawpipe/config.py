"""Pipeline configuration: the fully resolved per-run config, sampling
distributions over it, the training-dataset presets, and ablation.

Configs serialize to plain JSON mirroring the dataclass tree field for
field; unknown keys are rejected on parse.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, is_dataclass, replace
from typing import Any

import numpy as np

from .artifacts import BAYER_PATTERNS, AberrationParams, BlurParams, NoiseParams
from .demosaic import DEMOSAIC_METHODS, WhiteBalanceGains
from .denoise import BilateralParams, DenoiseChain, MedianParams, WaveletParams
from .postprocess import PostParams, UnsharpParams
from .tone import ToneCurve

_STEP_TYPES = {
    "bilateral": BilateralParams,
    "median": MedianParams,
    "wavelet": WaveletParams,
}
_STEP_NAMES = {v: k for k, v in _STEP_TYPES.items()}


@dataclass(frozen=True)
class PipelineConfig:
    """Every knob of one degradation run, plus the master seed."""

    artifacts: bool = True
    mosaick: bool = False
    demosaic: bool = False
    denoise: bool = False
    postprocess: bool = False

    exposure_gain: float = 1.0
    blur: BlurParams = field(default_factory=BlurParams)
    aberration: AberrationParams = field(default_factory=AberrationParams)
    noise: NoiseParams = field(default_factory=NoiseParams)
    bayer_pattern: str = "RGGB"

    demosaic_method: str = "kodak"
    white_balance: WhiteBalanceGains = field(default_factory=WhiteBalanceGains)
    defect_threshold: float | None = None  # None disables correction

    denoise_chain: DenoiseChain = field(default_factory=DenoiseChain)
    post: PostParams = field(default_factory=PostParams)

    seed: int = 0

    def __post_init__(self):
        if self.mosaick and not self.demosaic:
            raise ValueError("mosaick requires demosaic to be enabled")
        if self.bayer_pattern not in BAYER_PATTERNS:
            raise ValueError(f"unknown Bayer pattern {self.bayer_pattern!r}")
        if self.demosaic_method not in DEMOSAIC_METHODS:
            raise ValueError(f"unknown demosaic method {self.demosaic_method!r}")
        if self.defect_threshold is not None and not self.defect_threshold > 0:
            raise ValueError("defect threshold must be > 0 or None")
        if self.exposure_gain <= 0:
            raise ValueError("exposure gain must be > 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


# ---------------------------------------------------------------------------
# JSON serialization


def _to_plain(obj: Any) -> Any:
    if isinstance(obj, DenoiseChain):
        d = {
            "pre_tonemap": _to_plain(obj.pre_tonemap),
            "invert_pre_tonemap_after": obj.invert_pre_tonemap_after,
            "steps": [
                {"type": _STEP_NAMES[type(s)], **_to_plain_dataclass(s)} for s in obj.steps
            ],
        }
        return d
    if is_dataclass(obj) and not isinstance(obj, type):
        return _to_plain_dataclass(obj)
    return obj


def _to_plain_dataclass(obj: Any) -> dict:
    return {f.name: _to_plain(getattr(obj, f.name)) for f in fields(obj)}


def _from_plain(cls: type, data: Any, where: str) -> Any:
    if cls is DenoiseChain:
        if not isinstance(data, dict):
            raise ValueError(f"{where}: expected object")
        allowed = {"pre_tonemap", "invert_pre_tonemap_after", "steps"}
        unknown = set(data) - allowed
        if unknown:
            raise ValueError(f"{where}: unknown keys {sorted(unknown)}")
        steps = []
        for i, s in enumerate(data.get("steps", [])):
            s = dict(s)
            kind = s.pop("type", None)
            if kind not in _STEP_TYPES:
                raise ValueError(f"{where}.steps[{i}]: unknown step type {kind!r}")
            steps.append(_from_plain(_STEP_TYPES[kind], s, f"{where}.steps[{i}]"))
        return DenoiseChain(
            pre_tonemap=_from_plain(ToneCurve, data.get("pre_tonemap", {}), f"{where}.pre_tonemap"),
            invert_pre_tonemap_after=bool(data.get("invert_pre_tonemap_after", False)),
            steps=tuple(steps),
        )
    if is_dataclass(cls):
        if not isinstance(data, dict):
            raise ValueError(f"{where}: expected object")
        kwargs = {}
        known = {f.name: f for f in fields(cls)}
        unknown = set(data) - set(known)
        if unknown:
            raise ValueError(f"{where}: unknown keys {sorted(unknown)}")
        hints = {f.name: f.type for f in fields(cls)}
        sub_types = {
            "blur": BlurParams,
            "aberration": AberrationParams,
            "noise": NoiseParams,
            "white_balance": WhiteBalanceGains,
            "denoise_chain": DenoiseChain,
            "post": PostParams,
            "tone_curve": ToneCurve,
            "pre_tonemap": ToneCurve,
            "unsharp": UnsharpParams,
        }
        for name, value in data.items():
            sub = sub_types.get(name)
            if sub is not None and isinstance(value, dict):
                kwargs[name] = _from_plain(sub, value, f"{where}.{name}")
            else:
                kwargs[name] = value
        return cls(**kwargs)
    return data


def config_to_json(cfg: PipelineConfig, indent: int | None = 2) -> str:
    return json.dumps(_to_plain(cfg), indent=indent)


def config_from_json(text: str) -> PipelineConfig:
    data = json.loads(text)
    return _from_plain(PipelineConfig, data, "config")


def config_to_dict(cfg: PipelineConfig) -> dict:
    return _to_plain(cfg)


def config_from_dict(data: dict) -> PipelineConfig:
    return _from_plain(PipelineConfig, data, "config")


# ---------------------------------------------------------------------------
# Parameter ranges and sampling


@dataclass(frozen=True)
class Dist:
    """Sampling distribution for one scalar: fixed, uniform, uniform-int,
    or a weighted choice."""

    kind: str
    value: Any = None
    lo: float = 0.0
    hi: float = 0.0
    values: tuple = ()
    weights: tuple = ()

    def __post_init__(self):
        if self.kind not in ("fixed", "uniform", "uniform-int", "choice"):
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if self.kind in ("uniform", "uniform-int") and not self.lo <= self.hi:
            raise ValueError(f"interval lo {self.lo} > hi {self.hi}")
        if self.kind == "choice":
            if not self.values:
                raise ValueError("choice needs at least one value")
            w = self.weights or tuple(1.0 for _ in self.values)
            if len(w) != len(self.values) or any(x < 0 for x in w) or sum(w) == 0:
                raise ValueError("invalid choice weights")

    def sample(self, rng: np.random.Generator):
        if self.kind == "fixed":
            return self.value
        if self.kind == "uniform":
            return float(rng.uniform(self.lo, self.hi))
        if self.kind == "uniform-int":
            return int(rng.integers(int(self.lo), int(self.hi) + 1))
        w = np.array(self.weights or [1.0] * len(self.values), dtype=np.float64)
        idx = int(rng.choice(len(self.values), p=w / w.sum()))
        return self.values[idx]


def fixed(v) -> Dist:
    return Dist(kind="fixed", value=v)


def uniform(lo: float, hi: float) -> Dist:
    return Dist(kind="uniform", lo=lo, hi=hi)


def uniform_int(lo: int, hi: int) -> Dist:
    return Dist(kind="uniform-int", lo=lo, hi=hi)


def choice(values, weights=None) -> Dist:
    return Dist(kind="choice", values=tuple(values), weights=tuple(weights or ()))


@dataclass(frozen=True)
class ParamRanges:
    """A template config plus per-path distributions (dotted attribute
    paths; sequence indices allowed, e.g. denoise_chain.steps.0.sigma_range)."""

    template: PipelineConfig
    ranges: dict[str, Dist] = field(default_factory=dict)


def _get_path(obj: Any, parts: list[str]) -> Any:
    for p in parts:
        obj = obj[int(p)] if p.isdigit() else getattr(obj, p)
    return obj


def _set_path(obj: Any, parts: list[str], value: Any) -> Any:
    head = parts[0]
    if len(parts) == 1:
        if head.isdigit():
            seq = list(obj)
            seq[int(head)] = value
            return tuple(seq)
        return replace(obj, **{head: value})
    if head.isdigit():
        seq = list(obj)
        seq[int(head)] = _set_path(seq[int(head)], parts[1:], value)
        return tuple(seq)
    child = _set_path(getattr(obj, head), parts[1:], value)
    return replace(obj, **{head: child})


def sample_params(ranges: ParamRanges, rng: np.random.Generator) -> PipelineConfig:
    """Draw every ranged scalar independently; deterministic given the
    generator seed. The run seed is drawn last unless explicitly ranged."""
    cfg = ranges.template
    for path in sorted(ranges.ranges):
        value = ranges.ranges[path].sample(rng)
        cfg = _set_path(cfg, path.split("."), value)
    if "seed" not in ranges.ranges:
        cfg = replace(cfg, seed=int(rng.integers(0, 2**63)))
    return cfg


# ---------------------------------------------------------------------------
# Presets (training-dataset rows) and ablation

PRESET_NAMES = ("awgn", "amwgn", "full", "s7-iso800")

_NOISE_ONLY = PipelineConfig(
    artifacts=True,
    mosaick=False,
    demosaic=False,
    denoise=False,
    postprocess=False,
)

_FULL_TEMPLATE = PipelineConfig(
    artifacts=True,
    mosaick=True,
    demosaic=True,
    denoise=True,
    postprocess=True,
    demosaic_method="kodak",
    denoise_chain=DenoiseChain(
        pre_tonemap=ToneCurve(kind="gamma", gamma=2.0),
        invert_pre_tonemap_after=True,
        steps=(
            BilateralParams(sigma_spatial=1.2, sigma_range=0.08, radius=2),
            MedianParams(window=3, target="per-channel"),
        ),
    ),
    # Tone and color stay neutral: the post stage contributes unsharp + JPEG.
    post=PostParams(
        saturation=1.0,
        tone_curve=ToneCurve(),
        unsharp=UnsharpParams(amount=0.5, radius=1.0, threshold=0.0),
        jpeg_quality=80,
    ),
)


def preset(name: str) -> ParamRanges:
    """Sampling ranges for one training-dataset row."""
    if name == "awgn":
        return ParamRanges(
            template=_NOISE_ONLY, ranges={"noise.gaussian_std": uniform(0.0, 0.2)}
        )
    if name == "amwgn":
        return ParamRanges(
            template=_NOISE_ONLY,
            ranges={
                "noise.gaussian_std": uniform(0.0, 0.1),
                "noise.poisson_mult": uniform(0.0, 0.02),
            },
        )
    if name == "full":
        return ParamRanges(
            template=_FULL_TEMPLATE,
            ranges={
                "noise.gaussian_std": uniform(0.0, 0.1),
                "noise.poisson_mult": uniform(0.0, 0.02),
                "denoise_chain.steps.0.sigma_range": uniform(0.05, 0.15),
                "post.unsharp.amount": uniform(0.0, 1.0),
                "post.jpeg_quality": uniform_int(70, 95),
            },
        )
    if name == "s7-iso800":
        return ParamRanges(
            template=replace(
                _NOISE_ONLY, noise=NoiseParams(gaussian_std=0.007, poisson_mult=0.02)
            ),
            ranges={},
        )
    raise ValueError(f"unknown preset {name!r}")


_ABLATION_STAGES = ("postprocess", "denoise", "demosaic")


def ablation(ranges: ParamRanges, drop: str) -> ParamRanges:
    """Force one stage off (demosaic off also forces mosaick off) and drop
    its sampling ranges; idempotent."""
    if drop not in _ABLATION_STAGES:
        raise ValueError(f"unknown ablation stage {drop!r}")
    tpl = ranges.template
    prefixes: tuple[str, ...]
    if drop == "postprocess":
        tpl = replace(tpl, postprocess=False)
        prefixes = ("post.",)
    elif drop == "denoise":
        tpl = replace(tpl, denoise=False)
        prefixes = ("denoise_chain.",)
    else:
        tpl = replace(tpl, demosaic=False, mosaick=False)
        prefixes = ("demosaic_method", "white_balance.", "defect_threshold")
    kept = {
        k: v for k, v in ranges.ranges.items() if not any(k.startswith(p) for p in prefixes)
    }
    return ParamRanges(template=tpl, ranges=kept)
