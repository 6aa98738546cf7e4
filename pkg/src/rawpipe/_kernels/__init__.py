"""Hot-kernel backend selection.

The compiled extension and the pure-numpy fallback implement the same
arithmetic in the same order (float64 internally, float32 out), so the
demosaicking and median kernels agree bit-for-bit; the bilateral kernel
may differ by float ulps in its exp() evaluations.

Set RAWPIPE_BACKEND=python to force the fallback, =native to require the
extension.
"""

from __future__ import annotations

import os

from . import fallback

_requested = os.environ.get("RAWPIPE_BACKEND", "auto")

impl = fallback
BACKEND = "python"
if _requested in ("auto", "native"):
    try:
        from . import _native

        impl = _native
        BACKEND = "native"
    except ImportError:
        if _requested == "native":
            raise
elif _requested != "python":
    raise RuntimeError(f"unknown RAWPIPE_BACKEND {_requested!r}")

bilinear_demosaic_padded = impl.bilinear_demosaic_padded
kodak_demosaic_padded = impl.kodak_demosaic_padded
median_filter_padded = impl.median_filter_padded
bilateral_filter_padded = impl.bilateral_filter_padded
