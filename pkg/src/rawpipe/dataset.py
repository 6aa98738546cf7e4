"""Dataset generation: paired clean/degraded patches plus a JSONL
manifest that suffices to regenerate every pair bit-identically.

Worker processes only compute; all files are written by the parent in
deterministic (source, patch, epoch) order, so worker count never changes
the output bytes. Set SOURCE_DATE_EPOCH to pin the manifest header
timestamp for fully byte-identical trees.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .color import linear_to_srgb, srgb_to_linear
from .config import config_from_dict, config_to_dict, preset, sample_params
from .image_io import load_srgb, save_png8, save_rpf
from .pipeline import run_pipeline
from .rng import STREAM_PATCH, derive_rng, mix_seed
from .sampling import PatchSpec, crop, downsample, extract_patches

_SOURCE_EXTS = (".png", ".jpg", ".jpeg")


def worker_count(requested: int | None = None) -> int:
    cap = os.environ.get("RAWPIPE_THREADS")
    n = requested if requested is not None else (os.cpu_count() or 1)
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


def _list_sources(src_dir: Path) -> list[Path]:
    return sorted(p for p in src_dir.iterdir() if p.suffix.lower() in _SOURCE_EXTS)


def _prepare_source(path: Path, downsample_factor: int) -> np.ndarray:
    """Linearize and downsample one clean photograph."""
    return downsample(srgb_to_linear(load_srgb(path)), downsample_factor)


def _source_job(args) -> list[dict]:
    """Compute every record for one source image (runs in a worker)."""
    (src_idx, path, master_seed, ranges, patches_per_image, patch_size, epochs, ds) = args
    linear = _prepare_source(path, ds)
    patch_rng = derive_rng(master_seed, STREAM_PATCH, src_idx)
    patches = extract_patches(linear, patches_per_image, patch_size, patch_rng, source_id=path.name)
    out = []
    for patch_idx, (spec, clean) in enumerate(patches):
        for epoch in range(epochs):
            patch_seed = mix_seed(master_seed, src_idx, patch_idx, epoch)
            cfg = sample_params(ranges, np.random.default_rng(patch_seed))
            degraded = run_pipeline(clean, cfg)
            out.append(
                {
                    "source": path.name,
                    "source_index": src_idx,
                    "patch_index": patch_idx,
                    "epoch": epoch,
                    "patch": {"top": spec.top, "left": spec.left, "size": spec.size},
                    "patch_seed": patch_seed,
                    "config": config_to_dict(cfg),
                    "_clean": clean,
                    "_degraded": degraded,
                }
            )
    return out


def generate_dataset(
    src_dir: str | Path,
    preset_name: str,
    out_dir: str | Path,
    patches_per_image: int = 5,
    patch_size: int = 80,
    seed: int = 0,
    epochs: int = 1,
    downsample_factor: int = 4,
    workers: int | None = None,
) -> Path:
    """Run the full data-generation recipe; returns the manifest path."""
    if patch_size < 16:
        raise ValueError(f"patch size must be >= 16, got {patch_size}")
    src_dir = Path(src_dir)
    out_dir = Path(out_dir)
    sources = _list_sources(src_dir)
    if not sources:
        raise ValueError(f"no source images in {src_dir}")
    ranges = preset(preset_name)

    usable: list[tuple[int, Path]] = []
    warnings: list[str] = []
    for idx, path in enumerate(sources):
        try:
            img = load_srgb(path)
            small = downsample(img, downsample_factor)
            if small.shape[0] < patch_size or small.shape[1] < patch_size:
                raise ValueError(
                    f"downsampled size {small.shape[0]}x{small.shape[1]} < patch {patch_size}"
                )
        except Exception as exc:
            warnings.append(f"{path.name}: skipped ({exc})")
            continue
        usable.append((idx, path))
    if not usable:
        raise ValueError(f"no usable source images in {src_dir}: {warnings}")

    jobs = [
        (idx, path, seed, ranges, patches_per_image, patch_size, epochs, downsample_factor)
        for idx, path in usable
    ]
    n_workers = worker_count(workers)
    if n_workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(_source_job, jobs))
    else:
        results = [_source_job(j) for j in jobs]

    (out_dir / "clean").mkdir(parents=True, exist_ok=True)
    (out_dir / "degraded").mkdir(parents=True, exist_ok=True)
    created = int(os.environ.get("SOURCE_DATE_EPOCH", int(time.time())))
    header = {
        "type": "header",
        "preset": preset_name,
        "tool_version": __version__,
        "created": created,
        "master_seed": seed,
        "patches_per_image": patches_per_image,
        "patch_size": patch_size,
        "epochs": epochs,
        "downsample": downsample_factor,
        "src_dir": str(src_dir),
        "warnings": warnings,
    }
    manifest_path = out_dir / "manifest.jsonl"
    seen_seeds = set()
    with open(manifest_path, "w") as mf:
        mf.write(json.dumps(header) + "\n")
        for records in results:
            for rec in records:
                clean = rec.pop("_clean")
                degraded = rec.pop("_degraded")
                stem = f"{rec['source_index']:04d}_{rec['patch_index']:02d}_e{rec['epoch']:02d}"
                clean_rel = f"clean/{rec['source_index']:04d}_{rec['patch_index']:02d}.rpf"
                degraded_rel = f"degraded/{stem}.rpf"
                preview_rel = f"degraded/{stem}.png"
                if rec["epoch"] == 0:
                    save_rpf(out_dir / clean_rel, clean)
                save_rpf(out_dir / degraded_rel, degraded)
                save_png8(out_dir / preview_rel, linear_to_srgb(degraded))
                if rec["patch_seed"] in seen_seeds:
                    raise RuntimeError(f"per-patch seed collision: {rec['patch_seed']}")
                seen_seeds.add(rec["patch_seed"])
                rec.update(
                    {"type": "patch", "clean": clean_rel, "degraded": degraded_rel,
                     "degraded_preview": preview_rel}
                )
                mf.write(json.dumps(rec) + "\n")
    return manifest_path


def read_manifest(manifest_path: str | Path) -> tuple[dict, list[dict]]:
    """Parse and validate a manifest; raises before any regeneration if
    the file is truncated or malformed."""
    manifest_path = Path(manifest_path)
    header = None
    records = []
    with open(manifest_path) as f:
        for ln, line in enumerate(f):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{manifest_path}:{ln + 1}: malformed record: {exc}") from exc
            if ln == 0:
                if rec.get("type") != "header":
                    raise ValueError(f"{manifest_path}: first record must be the header")
                header = rec
            else:
                if rec.get("type") != "patch":
                    raise ValueError(f"{manifest_path}:{ln + 1}: expected a patch record")
                for key in ("source", "source_index", "patch_index", "epoch", "patch",
                            "config", "clean", "degraded"):
                    if key not in rec:
                        raise ValueError(f"{manifest_path}:{ln + 1}: missing key {key!r}")
                records.append(rec)
    if header is None:
        raise ValueError(f"{manifest_path}: empty manifest")
    return header, records


def regenerate_from_manifest(
    manifest_path: str | Path, out_dir: str | Path | None = None, src_dir: str | Path | None = None
) -> Path:
    """Reproduce every pair bit-identically from sources plus recorded
    configs. All validation happens before any file is written."""
    manifest_path = Path(manifest_path)
    header, records = read_manifest(manifest_path)
    out_dir = Path(out_dir) if out_dir is not None else manifest_path.parent
    src_dir = Path(src_dir) if src_dir is not None else Path(header["src_dir"])

    missing = sorted({r["source"] for r in records if not (src_dir / r["source"]).exists()})
    if missing:
        raise FileNotFoundError(f"missing source files: {missing}")
    configs = [config_from_dict(r["config"]) for r in records]

    (out_dir / "clean").mkdir(parents=True, exist_ok=True)
    (out_dir / "degraded").mkdir(parents=True, exist_ok=True)
    cache: dict[str, np.ndarray] = {}
    for rec, cfg in zip(records, configs):
        if rec["source"] not in cache:
            cache[rec["source"]] = _prepare_source(src_dir / rec["source"], header["downsample"])
        p = rec["patch"]
        spec = PatchSpec(source_id=rec["source"], top=p["top"], left=p["left"], size=p["size"])
        clean = np.ascontiguousarray(crop(cache[rec["source"]], spec))
        degraded = run_pipeline(clean, cfg)
        save_rpf(out_dir / rec["clean"], clean)
        save_rpf(out_dir / rec["degraded"], degraded)
        if "degraded_preview" in rec:
            save_png8(out_dir / rec["degraded_preview"], linear_to_srgb(degraded))
    return out_dir


def _bench_job(args) -> int:
    patches, ranges, seed0 = args
    for i, patch in enumerate(patches):
        cfg = sample_params(preset(ranges) if isinstance(ranges, str) else ranges,
                            np.random.default_rng(mix_seed(seed0, i)))
        run_pipeline(patch, cfg)
    return len(patches)


def benchmark_throughput(
    preset_name: str, patch_size: int = 80, count: int = 32, seed: int = 0
) -> dict:
    """Wall-clock patches/second, single-threaded and all-cores."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    base = rng.random((patch_size, patch_size, 3), dtype=np.float32)
    patches = [np.ascontiguousarray(base) for _ in range(count)]

    t0 = time.perf_counter()
    _bench_job((patches, preset_name, seed))
    single = count / (time.perf_counter() - t0)

    n_workers = worker_count()
    chunks = [patches[i::n_workers] for i in range(n_workers)]
    t0 = time.perf_counter()
    if n_workers > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            list(pool.map(_bench_job, [(c, preset_name, seed) for c in chunks if c]))
    else:
        _bench_job((patches, preset_name, seed))
    multi = count / (time.perf_counter() - t0)
    return {
        "preset": preset_name,
        "patch_size": patch_size,
        "count": count,
        "single_thread_patches_per_s": single,
        "all_cores_patches_per_s": multi,
        "workers": n_workers,
        "ms_per_patch_single": 1000.0 / single,
    }
