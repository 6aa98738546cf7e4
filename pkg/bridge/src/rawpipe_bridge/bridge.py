"""In-memory (degraded, clean) batch streaming.

Pairs are produced in (source index, patch index) order with exactly the
same seed derivation the dataset writer uses, so the arrays streamed here
are bit-identical to the .rpf files the command-line `generate` would
write for the same (seed, sources, epoch). Epoch advancement is explicit:
the caller picks the epoch index, matching per-epoch re-randomization.
"""

from __future__ import annotations

import queue
import threading
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from rawpipe.color import srgb_to_linear
from rawpipe.config import preset, sample_params
from rawpipe.dataset import read_manifest
from rawpipe.image_io import load_rpf, load_srgb
from rawpipe.pipeline import run_pipeline
from rawpipe.rng import STREAM_PATCH, derive_rng, mix_seed
from rawpipe.sampling import downsample, extract_patches

__all__ = ["BatchSpec", "iter_pairs", "stream_batches", "read_manifest", "load_pairs_from_manifest"]


@dataclass(frozen=True)
class BatchSpec:
    """One training-stream configuration; field semantics mirror the
    dataset-generation command line."""

    preset: str
    batch_size: int = 32
    patch_size: int = 80
    seed: int = 0
    epoch: int = 0
    patches_per_image: int = 5
    downsample: int = 4

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError(f"batch size must be >= 1, got {self.batch_size}")
        if self.patch_size < 16:
            raise ValueError(f"patch size must be >= 16, got {self.patch_size}")
        if self.epoch < 0:
            raise ValueError("epoch index must be >= 0")
        preset(self.preset)  # validates the name eagerly


def iter_pairs(
    spec: BatchSpec, sources: Sequence[str | Path]
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield (degraded, clean) float32 pairs in (source, patch) order.

    Every yielded array is freshly allocated; callers may keep or mutate
    them freely.
    """
    if not sources:
        raise ValueError("no source images given")
    ranges = preset(spec.preset)
    for src_idx, path in enumerate(sources):
        linear = downsample(srgb_to_linear(load_srgb(path)), spec.downsample)
        patch_rng = derive_rng(spec.seed, STREAM_PATCH, src_idx)
        patches = extract_patches(
            linear, spec.patches_per_image, spec.patch_size, patch_rng, source_id=Path(path).name
        )
        for patch_idx, (_, clean) in enumerate(patches):
            patch_seed = mix_seed(spec.seed, src_idx, patch_idx, spec.epoch)
            cfg = sample_params(ranges, np.random.default_rng(patch_seed))
            degraded = run_pipeline(clean, cfg)
            yield degraded, clean


def _batched(
    pairs: Iterable[tuple[np.ndarray, np.ndarray]], batch_size: int
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    degraded: list[np.ndarray] = []
    clean: list[np.ndarray] = []
    for d, c in pairs:
        degraded.append(d)
        clean.append(c)
        if len(degraded) == batch_size:
            yield np.stack(degraded), np.stack(clean)
            degraded, clean = [], []
    if degraded:
        # Last batch may be short; it is never silently padded.
        yield np.stack(degraded), np.stack(clean)


def _prefetched(it: Iterator, depth: int) -> Iterator:
    """Run the producer on a background thread, ``depth`` items ahead.

    Yield order is the producer's order; prefetch only hides latency.
    """
    q: queue.Queue = queue.Queue(maxsize=depth)
    done = object()

    def producer() -> None:
        try:
            for item in it:
                q.put(item)
            q.put(done)
        except BaseException as exc:  # re-raise on the consumer side
            q.put(exc)

    t = threading.Thread(target=producer, daemon=True)
    t.start()
    while True:
        item = q.get()
        if item is done:
            return
        if isinstance(item, BaseException):
            raise item
        yield item


def stream_batches(
    spec: BatchSpec, sources: Sequence[str | Path], prefetch: int = 0
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Iterate (degraded batch, clean batch) arrays of shape
    (batch, patch, patch, 3), float32, ceil(pairs / batch_size) batches
    total. ``prefetch`` > 0 computes up to that many batches ahead on a
    background thread without changing the order.
    """
    batches = _batched(iter_pairs(spec, sources), spec.batch_size)
    if prefetch > 0:
        batches = _prefetched(batches, prefetch)
    return batches


def load_pairs_from_manifest(
    manifest_path: str | Path,
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Stream (degraded, clean) pairs from an already-written dataset, in
    manifest record order."""
    manifest_path = Path(manifest_path)
    root = manifest_path.parent
    _, records = read_manifest(manifest_path)
    for rec in records:
        yield load_rpf(root / rec["degraded"]), load_rpf(root / rec["clean"])
