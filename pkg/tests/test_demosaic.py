"""Demosaickers and mosaic-domain corrections against brute-force oracles."""

from __future__ import annotations

import numpy as np
import pytest

from rawpipe._kernels import fallback
from rawpipe.artifacts import BayerMosaic, NoiseParams, add_noise, mosaick, pattern_channel_map
from rawpipe.demosaic import (
    WhiteBalanceGains,
    correct_defective_pixels,
    demosaic,
    white_balance,
)
from rawpipe.ahd import demosaic_ahd
from rawpipe.metrics import psnr, residual_autocorrelation

from oracles import cfa_channel, oracle_bilinear, oracle_defect, oracle_kodak

PATTERNS = ("RGGB", "BGGR", "GRBG", "GBRG")


def random_mosaic(rng, h=16, w=16, pattern="RGGB"):
    return BayerMosaic(data=rng.random((h, w)).astype(np.float32), pattern=pattern)


class TestDefectCorrection:
    def test_clean_mosaic_untouched(self, rng):
        m = BayerMosaic(data=np.full((8, 8), 0.5, dtype=np.float32))
        out = correct_defective_pixels(m, 0.1)
        assert np.array_equal(out.data, m.data)

    def test_hot_pixel_replaced(self):
        data = np.full((10, 10), 0.4, dtype=np.float32)
        data[4, 4] = 5.0
        out = correct_defective_pixels(BayerMosaic(data=data), 0.2)
        assert out.data[4, 4] == pytest.approx(0.4, abs=1e-6)
        assert np.array_equal(np.delete(out.data.ravel(), 44), np.delete(data.ravel(), 44))

    def test_untouched_sites_bit_exact(self, rng):
        m = random_mosaic(rng, 12, 12)
        out = correct_defective_pixels(m, 1e6)
        assert np.array_equal(out.data, m.data)

    @pytest.mark.parametrize("pattern", PATTERNS)
    def test_matches_oracle(self, rng, pattern):
        for _ in range(5):
            data = rng.random((16, 16)).astype(np.float32)
            # inject a few defects
            for _ in range(4):
                y, x = rng.integers(0, 16, size=2)
                data[y, x] = 10.0
            out = correct_defective_pixels(BayerMosaic(data=data, pattern=pattern), 0.3)
            assert np.array_equal(out.data, oracle_defect(data, pattern, 0.3))

    def test_rejects_bad_threshold(self, rng):
        with pytest.raises(ValueError):
            correct_defective_pixels(random_mosaic(rng), 0.0)


class TestWhiteBalance:
    def test_identity_gains(self, rng):
        m = random_mosaic(rng)
        assert np.array_equal(white_balance(m, WhiteBalanceGains()).data, m.data)

    def test_per_site_gain(self, rng):
        m = random_mosaic(rng, pattern="RGGB")
        out = white_balance(m, WhiteBalanceGains(r_gain=2.0, g_gain=1.0, b_gain=4.0))
        chan = pattern_channel_map("RGGB", 16, 16)
        gains = np.array([2.0, 1.0, 4.0], dtype=np.float32)
        assert np.allclose(out.data, m.data * gains[chan], atol=1e-7)

    def test_inverse_round_trip(self, rng):
        m = random_mosaic(rng)
        fwd = white_balance(m, WhiteBalanceGains(1.8, 1.0, 1.4))
        back = white_balance(fwd, WhiteBalanceGains(1 / 1.8, 1.0, 1 / 1.4))
        assert np.abs(back.data - m.data).max() < 1e-6

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            WhiteBalanceGains(r_gain=0.0)


class TestBilinear:
    def test_constant(self):
        m = BayerMosaic(data=np.full((8, 8), 0.3, dtype=np.float32))
        out = demosaic(m, "bilinear")
        assert np.abs(out - 0.3).max() < 1e-7

    @pytest.mark.parametrize("pattern", PATTERNS)
    def test_matches_oracle_exactly(self, rng, pattern):
        m = random_mosaic(rng, pattern=pattern)
        out = demosaic(m, "bilinear")
        ref = oracle_bilinear(m.data, pattern)
        assert np.array_equal(out[2:-2, 2:-2], ref[2:-2, 2:-2])

    def test_sampled_site_passthrough(self, rng):
        m = random_mosaic(rng, pattern="GRBG")
        out = demosaic(m, "bilinear")
        chan = pattern_channel_map("GRBG", *m.shape)
        for c in range(3):
            mask = chan == c
            assert np.array_equal(out[:, :, c][mask], m.data[mask])

    def test_linear_in_input(self, rng):
        a = random_mosaic(rng)
        b = random_mosaic(rng)
        mixed = BayerMosaic(data=(0.5 * a.data + 0.5 * b.data).astype(np.float32))
        out = demosaic(mixed, "bilinear")
        ref = 0.5 * demosaic(a, "bilinear") + 0.5 * demosaic(b, "bilinear")
        assert np.abs(out - ref).max() < 1e-6


class TestKodak:
    def test_constant(self):
        m = BayerMosaic(data=np.full((8, 8), 0.7, dtype=np.float32))
        assert np.abs(demosaic(m, "kodak") - 0.7).max() < 1e-7

    @pytest.mark.parametrize("pattern", PATTERNS)
    def test_matches_oracle_exactly(self, rng, pattern):
        m = random_mosaic(rng, pattern=pattern)
        out = demosaic(m, "kodak")
        ref = oracle_kodak(m.data, pattern)
        assert np.array_equal(out[2:-2, 2:-2], ref[2:-2, 2:-2])

    def test_follows_vertical_edge(self):
        # A hard vertical edge: the gradient-directed green must interpolate
        # along the edge (vertically), not across it.
        img = np.zeros((16, 16, 3), dtype=np.float32)
        img[:, 8:, :] = 1.0
        m = mosaick(img, "RGGB")
        out = demosaic(m, "kodak")
        # Column 7 is right next to the edge; vertical interpolation keeps
        # it exactly 0, whereas bilinear bleeds the bright side across.
        assert np.abs(out[2:-2, 7]).max() < 1e-6
        naive = demosaic(m, "bilinear")
        assert np.abs(naive[2:-2, 7]).max() > 0.2

    def test_sampled_site_passthrough(self, rng):
        m = random_mosaic(rng, pattern="BGGR")
        out = demosaic(m, "kodak")
        chan = pattern_channel_map("BGGR", *m.shape)
        for c in range(3):
            mask = chan == c
            assert np.array_equal(out[:, :, c][mask], m.data[mask])


class TestAHD:
    def test_constant(self):
        m = BayerMosaic(data=np.full((12, 12), 0.25, dtype=np.float32))
        assert np.abs(demosaic(m, "ahd") - 0.25).max() < 1e-6

    def test_vertical_edge_direction(self):
        img = np.zeros((32, 32, 3), dtype=np.float32)
        ramp = np.linspace(0.1, 0.9, 32, dtype=np.float32)
        img[:] = ramp[None, :, None]
        img[:, 16:, :] += 0.5
        out, direction = demosaic_ahd(mosaick(np.clip(img, 0, 1), "RGGB"), return_direction=True)
        near_edge = direction[4:-4, 14:18]
        assert np.mean(near_edge == 1) > 0.8

    def test_sampled_site_passthrough(self, rng):
        m = random_mosaic(rng, 20, 20, pattern="GBRG")
        out = demosaic(m, "ahd")
        chan = pattern_channel_map("GBRG", 20, 20)
        for c in range(3):
            mask = chan == c
            assert np.array_equal(out[:, :, c][mask], m.data[mask])

    def test_median_passes_zero_allowed(self, rng):
        m = random_mosaic(rng)
        out = demosaic_ahd(m, median_passes=0)
        assert out.shape == (16, 16, 3)
        with pytest.raises(ValueError):
            demosaic_ahd(m, median_passes=-1)

    def test_beats_bilinear_on_detail(self, detail_crops_128):
        crop = detail_crops_128[0][:64, :64]
        m = mosaick(crop, "RGGB")
        p_bilinear = psnr(demosaic(m, "bilinear"), crop)
        p_ahd = psnr(demosaic(m, "ahd"), crop)
        assert p_ahd > p_bilinear


class TestDemosaicGeneral:
    def test_unknown_method(self, rng):
        with pytest.raises(ValueError):
            demosaic(random_mosaic(rng), "vng")

    def test_demosaicked_noise_is_correlated(self):
        # Interpolation smears iid sensor noise into spatially correlated
        # residuals: the defining artifact of camera-processed images.
        clean = np.full((64, 64, 3), 0.5, dtype=np.float32)
        m = mosaick(clean, "RGGB")
        noisy = add_noise(m.data, NoiseParams(0.05, 0.0), np.random.default_rng(0))
        out = demosaic(BayerMosaic(data=noisy, pattern="RGGB"), "bilinear")
        rho = residual_autocorrelation(out, clean)
        assert rho > 0.1

    @pytest.mark.parametrize("method", ("bilinear", "kodak"))
    def test_shift_equivariance_by_cfa_period(self, rng, method):
        # Shifting the scene by a full 2x2 CFA cell shifts the output.
        img = rng.random((20, 20, 3)).astype(np.float32)
        a = demosaic(mosaick(img, "RGGB"), method)
        b = demosaic(mosaick(np.ascontiguousarray(img[2:, 2:]), "RGGB"), method)
        assert np.array_equal(a[4:-4, 4:-4], b[2:-4, 2:-4])


class TestBackends:
    def test_fallback_matches_selected_backend(self, rng):
        # Bit-exact parity between the compiled extension and pure numpy.
        from rawpipe import _kernels

        padded = np.pad(rng.random((16, 16)), 2, mode="reflect")
        for ry, rx in ((0, 0), (0, 1), (1, 0), (1, 1)):
            a = _kernels.bilinear_demosaic_padded(np.ascontiguousarray(padded), ry, rx)
            b = fallback.bilinear_demosaic_padded(padded, ry, rx)
            assert np.array_equal(np.asarray(a), b)
            a = _kernels.kodak_demosaic_padded(np.ascontiguousarray(padded), ry, rx)
            b = fallback.kodak_demosaic_padded(padded, ry, rx)
            assert np.array_equal(np.asarray(a), b)

    def test_median_backend_parity(self, rng):
        from rawpipe import _kernels

        for window in (3, 5):
            r = window // 2
            padded = np.pad(rng.random((12, 14)), r, mode="reflect")
            a = _kernels.median_filter_padded(np.ascontiguousarray(padded), window)
            b = fallback.median_filter_padded(padded, window)
            assert np.array_equal(np.asarray(a), b)

    def test_bilateral_backend_parity(self, rng):
        from rawpipe import _kernels

        r = 2
        img = rng.random((10, 10, 3))
        guide = rng.random((10, 10))
        padded = np.pad(img, ((r, r), (r, r), (0, 0)), mode="reflect")
        guide_p = np.pad(guide, r, mode="reflect")
        d = np.arange(-r, r + 1, dtype=np.float64)
        dy, dx = np.meshgrid(d, d, indexing="ij")
        spatial = np.exp(-(dy * dy + dx * dx) / 2.0)
        a = _kernels.bilateral_filter_padded(
            np.ascontiguousarray(padded), np.ascontiguousarray(guide_p), spatial, 3.0
        )
        b = fallback.bilateral_filter_padded(padded, guide_p, spatial, 3.0)
        assert np.abs(np.asarray(a) - b).max() < 1e-12
