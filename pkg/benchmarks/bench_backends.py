"""Compare the compiled kernel extension against the pure-numpy fallback.

Run:  python3 benchmarks/bench_backends.py [--size 512] [--repeats 5]

Times each hot kernel (bilinear/Kodak demosaic, median, bilateral) on the
same inputs through both backends and prints per-kernel speedups plus an
end-to-end full-preset patch timing.
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np


def best_of(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=512)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    from rawpipe._kernels import fallback

    try:
        from rawpipe._kernels import _native as native
    except ImportError:
        raise SystemExit("compiled extension not built; nothing to compare")

    rng = np.random.default_rng(0)
    n = args.size
    mosaic = rng.random((n, n))
    padded = np.ascontiguousarray(np.pad(mosaic, 2, mode="reflect"))
    img3 = np.ascontiguousarray(rng.random((n, n, 3)))
    r = 2
    padded3 = np.ascontiguousarray(np.pad(img3, ((r, r), (r, r), (0, 0)), mode="reflect"))
    guide = np.ascontiguousarray(np.pad(rng.random((n, n)), r, mode="reflect"))
    d = np.arange(-r, r + 1, dtype=np.float64)
    dy, dx = np.meshgrid(d, d, indexing="ij")
    spatial = np.exp(-(dy * dy + dx * dx) / (2.0 * 1.2**2))
    med_padded = np.ascontiguousarray(np.pad(mosaic, 1, mode="reflect"))

    cases = {
        "bilinear_demosaic": (
            lambda m: m.bilinear_demosaic_padded(padded, 0, 0),
        ),
        "kodak_demosaic": (
            lambda m: m.kodak_demosaic_padded(padded, 0, 0),
        ),
        "median_3x3": (
            lambda m: m.median_filter_padded(med_padded, 3),
        ),
        "bilateral_r2": (
            lambda m: m.bilateral_filter_padded(padded3, guide, spatial, 1.0 / (2 * 0.08**2)),
        ),
    }

    results = {}
    for name, (fn,) in cases.items():
        t_native = best_of(lambda: fn(native), args.repeats)
        t_python = best_of(lambda: fn(fallback), args.repeats)
        results[name] = {
            "native_ms": round(t_native * 1e3, 3),
            "python_ms": round(t_python * 1e3, 3),
            "speedup": round(t_python / t_native, 2),
        }

    from rawpipe.dataset import benchmark_throughput

    results["full_preset_80px_patch"] = {
        "ms_per_patch_single": round(
            benchmark_throughput("full", patch_size=80, count=16)["ms_per_patch_single"], 2
        )
    }
    print(json.dumps({"size": n, "kernels": results}, indent=2))


if __name__ == "__main__":
    main()
