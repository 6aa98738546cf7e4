"""Batch iterator over the rawpipe degradation pipeline for training
loops that consume paired patches on the fly instead of from disk."""

from rawpipe import __version__ as _core_version

# Version-locked to the core package it binds.
__version__ = _core_version

from .bridge import BatchSpec, iter_pairs, load_pairs_from_manifest, read_manifest, stream_batches

__all__ = [
    "BatchSpec",
    "iter_pairs",
    "load_pairs_from_manifest",
    "read_manifest",
    "stream_batches",
    "__version__",
]
