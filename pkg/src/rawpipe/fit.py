"""Grid-search fitting of tone/color parameters against a target JPEG."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .color import rgb_to_luma_chroma, srgb_to_linear
from .config import PipelineConfig, _set_path, config_to_dict
from .pipeline import run_pipeline

_GRID_LIMIT = 1_000_000

# Channel each parameter family is scored on; joint objective is the sum.
_LUMA_FAMILIES = ("post.tone_curve", "denoise_chain.pre_tonemap", "exposure_gain")
_CHROMA_FAMILIES = ("post.saturation", "white_balance",)


def param_family(path: str) -> str:
    """'tone' parameters are scored on luminance, 'color' on chrominance."""
    if any(path.startswith(p) for p in _LUMA_FAMILIES):
        return "tone"
    if any(path.startswith(p) for p in _CHROMA_FAMILIES):
        return "color"
    return "joint"


@dataclass(frozen=True)
class FitSpace:
    """Finite grid per fitted parameter over a fixed base config."""

    base: PipelineConfig
    grids: dict[str, tuple] = field(default_factory=dict)

    def __post_init__(self):
        size = 1
        for path, values in self.grids.items():
            if len(values) == 0:
                raise ValueError(f"empty grid for {path}")
            size *= len(values)
        if size > _GRID_LIMIT:
            raise ValueError(f"grid size {size} exceeds limit {_GRID_LIMIT}")

    @property
    def size(self) -> int:
        return math.prod(len(v) for v in self.grids.values()) if self.grids else 1


@dataclass(frozen=True)
class FitResult:
    best: PipelineConfig
    best_values: dict[str, Any]
    luma_loss: float
    chroma_loss: float
    table: tuple | None = None

    @property
    def combined_loss(self) -> float:
        return self.luma_loss + self.chroma_loss

    def to_dict(self) -> dict:
        d = {
            "best_values": {k: v for k, v in self.best_values.items()},
            "luma_loss": self.luma_loss,
            "chroma_loss": self.chroma_loss,
            "combined_loss": self.combined_loss,
            "families": {k: param_family(k) for k in self.best_values},
            "best_config": config_to_dict(self.best),
        }
        if self.table is not None:
            d["table"] = [
                {"values": dict(v), "luma_loss": l, "chroma_loss": c} for v, l, c in self.table
            ]
        return d


def luma_chroma_loss(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    """MSE on the luma plane and MSE pooled over the two chroma planes."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    ya, cba, cra = (p.astype(np.float64) for p in rgb_to_luma_chroma(a))
    yb, cbb, crb = (p.astype(np.float64) for p in rgb_to_luma_chroma(b))
    luma_l2 = float(np.mean((ya - yb) ** 2))
    chroma_l2 = float((np.mean((cba - cbb) ** 2) + np.mean((cra - crb) ** 2)) / 2.0)
    return luma_l2, chroma_l2


def grid_search_fit(
    input_img: np.ndarray,
    target: np.ndarray,
    space: FitSpace,
    keep_table: bool = False,
) -> FitResult:
    """Exhaustively score every grid point of run_pipeline(input, cand)
    against the linearized target; ties break toward earlier lexicographic
    grid order, so the result is enumeration-order independent."""
    if not space.grids:
        raise ValueError("empty fit space")
    target_lin = srgb_to_linear(np.asarray(target, dtype=np.float32))
    paths = sorted(space.grids)
    best = None
    table = []
    for combo in itertools.product(*(space.grids[p] for p in paths)):
        cfg = space.base
        for path, value in zip(paths, combo):
            cfg = _set_path(cfg, path.split("."), value)
        out = run_pipeline(input_img, cfg)
        luma_l2, chroma_l2 = luma_chroma_loss(out, target_lin)
        combined = luma_l2 + chroma_l2
        if keep_table:
            table.append((dict(zip(paths, combo)), luma_l2, chroma_l2))
        if best is None or combined < best[0]:
            best = (combined, cfg, dict(zip(paths, combo)), luma_l2, chroma_l2)
    _, cfg, values, luma_l2, chroma_l2 = best
    return FitResult(
        best=cfg,
        best_values=values,
        luma_loss=luma_l2,
        chroma_loss=chroma_l2,
        table=tuple(table) if keep_table else None,
    )


def _refined_grid(values: tuple, center, shrink: float) -> tuple:
    vals = list(values)
    if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals):
        return tuple(values)  # categorical grid: keep as-is
    n = len(vals)
    if n == 1:
        return (center,)
    half = (max(vals) - min(vals)) / 2.0 * shrink
    grid = np.linspace(center - half, center + half, n)
    # The previous best must be re-evaluated exactly for loss monotonicity.
    grid[int(np.argmin(np.abs(grid - center)))] = center
    return tuple(float(v) for v in grid)


def refine_fit(
    input_img: np.ndarray,
    target: np.ndarray,
    result: FitResult,
    space: FitSpace,
    shrink: float = 0.5,
) -> tuple[FitResult, FitSpace]:
    """Re-grid around the previous best with intervals shrunk by
    ``shrink`` and re-run; the new best loss never exceeds the old."""
    if not 0.0 < shrink < 1.0:
        raise ValueError("shrink must lie in (0, 1)")
    new_grids = {
        path: _refined_grid(space.grids[path], result.best_values[path], shrink)
        for path in space.grids
    }
    new_space = FitSpace(base=space.base, grids=new_grids)
    new_result = grid_search_fit(input_img, target, new_space)
    return new_result, new_space
