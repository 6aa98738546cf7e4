"""Command-line entry points.

Exit codes: 0 success, 2 validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

EXIT_VALIDATION = 2
EXIT_IO = 3


def _cmd_generate(args) -> int:
    from .dataset import generate_dataset

    manifest = generate_dataset(
        src_dir=args.src,
        preset_name=args.preset,
        out_dir=args.out,
        patches_per_image=args.patches_per_image,
        patch_size=args.patch_size,
        seed=args.seed,
        epochs=args.epochs,
        downsample_factor=args.downsample,
        workers=args.workers,
    )
    print(manifest)
    return 0


def _cmd_regen(args) -> int:
    from .dataset import regenerate_from_manifest

    out = regenerate_from_manifest(args.manifest, out_dir=args.out, src_dir=args.src)
    print(out)
    return 0


def _cmd_bench(args) -> int:
    from .dataset import benchmark_throughput

    report = benchmark_throughput(args.preset, patch_size=args.patch_size, count=args.count)
    print(json.dumps(report, indent=2))
    return 0


def _cmd_metrics(args) -> int:
    from .color import srgb_to_linear
    from .image_io import load_rpf, load_srgb
    from .metrics import metric_report

    def load(path: str) -> np.ndarray:
        if path.endswith(".rpf"):
            return load_rpf(path)
        return srgb_to_linear(load_srgb(path))

    a = load(args.ground_truth)
    b = load(args.output)
    report = metric_report(b, a, peak=args.peak, normalize=not args.no_normalize)
    print(json.dumps(report.to_dict(), indent=2))
    return 0


def _cmd_fit(args) -> int:
    from .color import linear_to_srgb
    from .config import config_from_dict
    from .fit import FitSpace, grid_search_fit, refine_fit
    from .image_io import load_rpf, load_srgb, save_png8
    from .pipeline import run_pipeline

    space_doc = json.loads(Path(args.space).read_text())
    unknown = set(space_doc) - {"base", "grids"}
    if unknown:
        raise ValueError(f"fit space: unknown keys {sorted(unknown)}")
    space = FitSpace(
        base=config_from_dict(space_doc.get("base", {})),
        grids={k: tuple(v) for k, v in space_doc["grids"].items()},
    )
    if args.input.endswith(".rpf"):
        input_img = load_rpf(args.input)
    else:
        from .color import srgb_to_linear

        input_img = srgb_to_linear(load_srgb(args.input))
    target = load_srgb(args.target)

    result = grid_search_fit(input_img, target, space)
    for _ in range(args.refine):
        result, space = refine_fit(input_img, target, result, space)
    doc = result.to_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2))
    else:
        print(json.dumps(doc, indent=2))
    if args.diff:
        fitted = linear_to_srgb(run_pipeline(input_img, result.best))
        side = np.concatenate([fitted, target.astype(np.float32)], axis=1)
        save_png8(args.diff, side)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rawpipe", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="emit paired clean/degraded patches plus a manifest")
    g.add_argument("--src", required=True, help="directory of clean photographs")
    g.add_argument("--preset", required=True, choices=("awgn", "amwgn", "full", "s7-iso800"))
    g.add_argument("--patches-per-image", type=int, default=5)
    g.add_argument("--patch-size", type=int, default=80)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.add_argument("--epochs", type=int, default=1)
    g.add_argument("--downsample", type=int, default=4)
    g.add_argument("--workers", type=int, default=None)
    g.set_defaults(func=_cmd_generate)

    r = sub.add_parser("regen", help="reproduce a dataset from its manifest")
    r.add_argument("--manifest", required=True)
    r.add_argument("--out", default=None)
    r.add_argument("--src", default=None, help="override the recorded source directory")
    r.set_defaults(func=_cmd_regen)

    b = sub.add_parser("bench", help="measure patch generation throughput")
    b.add_argument("--preset", default="full", choices=("awgn", "amwgn", "full", "s7-iso800"))
    b.add_argument("--patch-size", type=int, default=80)
    b.add_argument("--count", type=int, default=32)
    b.set_defaults(func=_cmd_bench)

    f = sub.add_parser("fit", help="grid-search tone/color parameters against a target JPEG")
    f.add_argument("input", help="linear input image (.rpf) or display-space photo")
    f.add_argument("target", help="target camera JPEG")
    f.add_argument("space", help="fit-space JSON: {base: config, grids: {path: [values]}}")
    f.add_argument("--out", default=None, help="write the FitResult JSON here")
    f.add_argument("--diff", default=None, help="write a side-by-side comparison PNG")
    f.add_argument("--refine", type=int, default=0, help="refinement rounds after the grid pass")
    f.set_defaults(func=_cmd_fit)

    m = sub.add_parser("metrics", help="print a PSNR/SSIM report as JSON")
    m.add_argument("ground_truth")
    m.add_argument("output")
    m.add_argument("--peak", type=float, default=1.0)
    m.add_argument("--no-normalize", action="store_true")
    m.set_defaults(func=_cmd_metrics)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, IOError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
