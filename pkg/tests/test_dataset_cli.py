"""Dataset generation determinism, manifest regeneration, and the CLI."""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np
import pytest

from rawpipe.cli import main
from rawpipe.color import linear_to_srgb
from rawpipe.dataset import (
    generate_dataset,
    read_manifest,
    regenerate_from_manifest,
    worker_count,
)
from rawpipe.image_io import load_rpf, save_png8, save_rpf


@pytest.fixture(scope="module")
def source_dir(tmp_path_factory) -> Path:
    """Two small photographs saved as PNGs."""
    import skimage.data

    d = tmp_path_factory.mktemp("sources")
    save_png8(d / "a.png", skimage.data.astronaut()[:128, :128].astype(np.float32) / 255.0)
    save_png8(d / "b.png", skimage.data.chelsea()[:128, 100:228].astype(np.float32) / 255.0)
    return d


@pytest.fixture(autouse=True)
def pinned_timestamp(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")


def tree_bytes(root: Path) -> dict[str, bytes]:
    return {
        str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()
    }


def gen(source_dir, out, workers=1, preset="full", seed=11, epochs=1):
    return generate_dataset(
        src_dir=source_dir,
        preset_name=preset,
        out_dir=out,
        patches_per_image=2,
        patch_size=32,
        seed=seed,
        epochs=epochs,
        downsample_factor=2,
        workers=workers,
    )


class TestGenerate:
    def test_outputs_and_manifest(self, source_dir, tmp_path):
        manifest = gen(source_dir, tmp_path / "out")
        header, records = read_manifest(manifest)
        assert header["preset"] == "full"
        assert header["master_seed"] == 11
        assert len(records) == 4  # 2 sources x 2 patches
        for rec in records:
            clean = load_rpf(tmp_path / "out" / rec["clean"])
            degraded = load_rpf(tmp_path / "out" / rec["degraded"])
            assert clean.shape == (32, 32, 3) and degraded.shape == (32, 32, 3)
            assert not np.array_equal(clean, degraded)
            assert (tmp_path / "out" / rec["degraded_preview"]).exists()

    def test_distinct_patch_seeds(self, source_dir, tmp_path):
        _, records = read_manifest(gen(source_dir, tmp_path / "out"))
        seeds = [r["patch_seed"] for r in records]
        assert len(set(seeds)) == len(seeds)

    def test_byte_identical_across_runs(self, source_dir, tmp_path):
        gen(source_dir, tmp_path / "r1")
        gen(source_dir, tmp_path / "r2")
        assert tree_bytes(tmp_path / "r1") == tree_bytes(tmp_path / "r2")

    def test_byte_identical_across_worker_counts(self, source_dir, tmp_path):
        gen(source_dir, tmp_path / "w1", workers=1)
        gen(source_dir, tmp_path / "w4", workers=4)
        assert tree_bytes(tmp_path / "w1") == tree_bytes(tmp_path / "w4")

    def test_seed_changes_everything(self, source_dir, tmp_path):
        m1 = gen(source_dir, tmp_path / "s1", seed=1)
        m2 = gen(source_dir, tmp_path / "s2", seed=2)
        _, r1 = read_manifest(m1)
        _, r2 = read_manifest(m2)
        assert all(a["config"] != b["config"] for a, b in zip(r1, r2))

    def test_epochs_reuse_clean_patches(self, source_dir, tmp_path):
        manifest = gen(source_dir, tmp_path / "e", epochs=2)
        _, records = read_manifest(manifest)
        assert len(records) == 8
        by_patch = {}
        for rec in records:
            by_patch.setdefault((rec["source_index"], rec["patch_index"]), []).append(rec)
        for recs in by_patch.values():
            assert len(recs) == 2
            assert recs[0]["clean"] == recs[1]["clean"]
            assert recs[0]["degraded"] != recs[1]["degraded"]

    def test_unusable_sources_warned_not_fatal(self, source_dir, tmp_path, monkeypatch):
        import shutil

        d = tmp_path / "mixed"
        d.mkdir()
        shutil.copy(source_dir / "a.png", d / "a.png")
        (d / "broken.png").write_bytes(b"not a png")
        manifest = gen(d, tmp_path / "out")
        header, records = read_manifest(manifest)
        assert len(header["warnings"]) == 1
        assert len(records) == 2

    def test_empty_source_dir_rejected(self, tmp_path):
        (tmp_path / "empty").mkdir()
        with pytest.raises(ValueError):
            gen(tmp_path / "empty", tmp_path / "out")

    def test_worker_count_env_cap(self, monkeypatch):
        monkeypatch.setenv("RAWPIPE_THREADS", "2")
        assert worker_count(8) == 2
        assert worker_count(1) == 1
        monkeypatch.delenv("RAWPIPE_THREADS")
        assert worker_count(3) == 3


class TestRegen:
    def test_reproduces_bytes(self, source_dir, tmp_path):
        manifest = gen(source_dir, tmp_path / "orig")
        regenerate_from_manifest(manifest, out_dir=tmp_path / "again", src_dir=source_dir)
        orig = tree_bytes(tmp_path / "orig")
        again = tree_bytes(tmp_path / "again")
        del orig["manifest.jsonl"]  # regen does not rewrite the manifest
        assert orig == again

    def test_missing_source_detected_before_writing(self, source_dir, tmp_path):
        manifest = gen(source_dir, tmp_path / "orig")
        empty = tmp_path / "nosrc"
        empty.mkdir()
        with pytest.raises(FileNotFoundError):
            regenerate_from_manifest(manifest, out_dir=tmp_path / "never", src_dir=empty)
        assert not (tmp_path / "never" / "degraded").exists() or not any(
            (tmp_path / "never" / "degraded").iterdir()
        )

    def test_truncated_manifest_rejected(self, source_dir, tmp_path):
        manifest = gen(source_dir, tmp_path / "orig")
        text = manifest.read_text()
        manifest.write_text(text[: len(text) - 40])
        with pytest.raises(ValueError):
            read_manifest(manifest)

    def test_tampered_config_rejected(self, source_dir, tmp_path):
        manifest = gen(source_dir, tmp_path / "orig")
        lines = manifest.read_text().splitlines()
        rec = json.loads(lines[1])
        rec["config"]["sharpen"] = True
        lines[1] = json.dumps(rec)
        manifest.write_text("\n".join(lines) + "\n")
        with pytest.raises(ValueError):
            regenerate_from_manifest(manifest, out_dir=tmp_path / "never", src_dir=source_dir)

    def test_header_required_first(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"type": "patch"}\n')
        with pytest.raises(ValueError):
            read_manifest(bad)


class TestCli:
    def test_generate_and_regen(self, source_dir, tmp_path):
        rc = main(
            [
                "generate",
                "--src", str(source_dir),
                "--preset", "amwgn",
                "--patches-per-image", "2",
                "--patch-size", "32",
                "--seed", "3",
                "--out", str(tmp_path / "cli"),
                "--downsample", "2",
                "--workers", "1",
            ]
        )
        assert rc == 0
        rc = main(["regen", "--manifest", str(tmp_path / "cli" / "manifest.jsonl"),
                   "--out", str(tmp_path / "cli2"), "--src", str(source_dir)])
        assert rc == 0
        a = tree_bytes(tmp_path / "cli")
        b = tree_bytes(tmp_path / "cli2")
        del a["manifest.jsonl"]
        assert a == b

    def test_validation_error_exit_code(self, source_dir, tmp_path):
        rc = main(
            ["generate", "--src", str(source_dir), "--preset", "amwgn",
             "--patch-size", "4", "--out", str(tmp_path / "x")]
        )
        assert rc == 2

    def test_io_error_exit_code(self, tmp_path):
        rc = main(
            ["generate", "--src", str(tmp_path / "missing_dir"), "--preset", "awgn",
             "--out", str(tmp_path / "x")]
        )
        assert rc == 3

    def test_metrics_command(self, rng, tmp_path, capsys):
        a = rng.random((32, 32, 3)).astype(np.float32)
        b = np.clip(a + 0.02 * rng.standard_normal(a.shape).astype(np.float32), 0, 1)
        save_rpf(tmp_path / "a.rpf", a)
        save_rpf(tmp_path / "b.rpf", b)
        rc = main(["metrics", str(tmp_path / "a.rpf"), str(tmp_path / "b.rpf")])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["psnr"] > 20 and 0 < doc["ssim"] <= 1

    def test_metrics_missing_file(self, tmp_path):
        assert main(["metrics", str(tmp_path / "a.rpf"), str(tmp_path / "b.rpf")]) == 3

    def test_fit_command(self, rng, tmp_path, capsys):
        img = (rng.random((16, 16, 3)) * 0.8).astype(np.float32)
        save_rpf(tmp_path / "in.rpf", img)
        save_png8(tmp_path / "target.png", linear_to_srgb(img * 1.25))
        space = {
            "base": {"artifacts": True},
            "grids": {"exposure_gain": [0.75, 1.0, 1.25, 1.5]},
        }
        (tmp_path / "space.json").write_text(json.dumps(space))
        rc = main(
            ["fit", str(tmp_path / "in.rpf"), str(tmp_path / "target.png"),
             str(tmp_path / "space.json"), "--refine", "2",
             "--out", str(tmp_path / "fit.json"), "--diff", str(tmp_path / "diff.png")]
        )
        assert rc == 0
        doc = json.loads((tmp_path / "fit.json").read_text())
        assert abs(doc["best_values"]["exposure_gain"] - 1.25) < 0.05
        assert (tmp_path / "diff.png").exists()

    def test_fit_space_unknown_key(self, rng, tmp_path):
        img = rng.random((8, 8, 3)).astype(np.float32)
        save_rpf(tmp_path / "in.rpf", img)
        save_png8(tmp_path / "t.png", linear_to_srgb(img))
        (tmp_path / "space.json").write_text(json.dumps({"grids": {}, "extra": 1}))
        rc = main(["fit", str(tmp_path / "in.rpf"), str(tmp_path / "t.png"),
                   str(tmp_path / "space.json")])
        assert rc == 2

    def test_bench_command(self, capsys):
        rc = main(["bench", "--preset", "awgn", "--patch-size", "32", "--count", "2"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["single_thread_patches_per_s"] > 0
        assert doc["ms_per_patch_single"] > 0
