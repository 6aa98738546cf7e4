"""Adaptive homogeneity-directed demosaicking.

Two candidate reconstructions (horizontal-only / vertical-only green
interpolation with color-difference chroma) are compared per pixel by
counting CIELAB level-set neighbors within adaptive tolerances; the
direction with the larger box-smoothed homogeneity wins. Optional chroma
median passes clean residual speckle, after which sampled sites are
re-imposed so passthrough stays bit-exact.
"""

from __future__ import annotations

import numpy as np

from .artifacts import BayerMosaic, pattern_channel_map
from .demosaic import _r_parity

# D65 white point for the Lab conversion.
_XYZ_WHITE = np.array([0.95047, 1.0, 1.08883])
_RGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)


def _site_masks(h: int, w: int, ry: int, rx: int):
    """R / B / G-on-R-row / G-on-B-row masks for an (h, w) grid whose
    (0, 0) corner has the parity encoded by (ry, rx)."""
    yy, xx = np.meshgrid(np.arange(h) % 2, np.arange(w) % 2, indexing="ij")
    m_r = (yy == ry) & (xx == rx)
    m_b = (yy == 1 - ry) & (xx == 1 - rx)
    g_rrow = (yy == ry) & (xx == 1 - rx)
    g_brow = (yy == 1 - ry) & (xx == rx)
    return m_r, m_b, g_rrow, g_brow


def _rgb_to_lab(rgb: np.ndarray) -> np.ndarray:
    """CIELAB from linear sRGB-primary RGB, D65 white; the linear branch
    of f() also covers negative inputs from noise."""
    xyz = rgb @ _RGB_TO_XYZ.T
    t = xyz / _XYZ_WHITE
    f = np.where(t > 0.008856, np.cbrt(np.maximum(t, 1e-30)), 7.787 * t + 16.0 / 116.0)
    lab = np.empty_like(xyz)
    lab[..., 0] = 116.0 * f[..., 1] - 16.0
    lab[..., 1] = 500.0 * (f[..., 0] - f[..., 1])
    lab[..., 2] = 200.0 * (f[..., 1] - f[..., 2])
    return lab


def _box3(a: np.ndarray) -> np.ndarray:
    p = np.pad(a, 1, mode="edge")
    h, w = a.shape
    return sum(
        p[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w] for dy in (-1, 0, 1) for dx in (-1, 0, 1)
    )


def _median3(plane: np.ndarray) -> np.ndarray:
    p = np.pad(plane, 1, mode="reflect")
    win = np.lib.stride_tricks.sliding_window_view(p, (3, 3))
    return np.median(win.reshape(plane.shape[0], plane.shape[1], 9), axis=-1)


def _chroma_median(img: np.ndarray) -> np.ndarray:
    """One 3x3 median pass on the R-G and B-G planes; G untouched."""
    g = img[:, :, 1]
    r = _median3(img[:, :, 0] - g) + g
    b = _median3(img[:, :, 2] - g) + g
    return np.stack([r, g, b], axis=-1)


def _candidate(padded: np.ndarray, h: int, w: int, ry: int, rx: int, horizontal: bool):
    """One directional candidate over the interior plus a 1-pixel ring.

    ``padded`` is the mosaic with a 4-pixel mirror margin.
    """
    h4, w4 = h + 4, w + 4  # green / chroma-difference region: 2-pixel ring
    ctr = padded[2 : 2 + h4, 2 : 2 + w4]
    if horizontal:
        n1 = padded[2 : 2 + h4, 1 : 1 + w4]
        n2 = padded[2 : 2 + h4, 3 : 3 + w4]
        f1 = padded[2 : 2 + h4, 0:w4]
        f2 = padded[2 : 2 + h4, 4 : 4 + w4]
    else:
        n1 = padded[1 : 1 + h4, 2 : 2 + w4]
        n2 = padded[3 : 3 + h4, 2 : 2 + w4]
        f1 = padded[0:h4, 2 : 2 + w4]
        f2 = padded[4 : 4 + h4, 2 : 2 + w4]
    interp = (n1 + n2) * 0.5 + (2.0 * ctr - f1 - f2) * 0.25
    m_r4, m_b4, g_rrow4, g_brow4 = _site_masks(h4, w4, ry, rx)
    m_g4 = g_rrow4 | g_brow4
    green = np.where(m_g4, ctr, interp)
    dr = np.where(m_r4, ctr - green, 0.0)
    db = np.where(m_b4, ctr - green, 0.0)

    he, we = h + 2, w + 2  # output region: 1-pixel ring

    def interp_diff(d, on_sites, g_samerow, g_otherrow):
        def v(dy, dx):
            return d[1 + dy : 1 + dy + he, 1 + dx : 1 + dx + we]

        horiz = (v(0, -1) + v(0, 1)) * 0.5
        vert = (v(-1, 0) + v(1, 0)) * 0.5
        diag = ((v(-1, -1) + v(-1, 1)) + (v(1, -1) + v(1, 1))) * 0.25
        return np.select([on_sites, g_samerow, g_otherrow], [v(0, 0), horiz, vert], diag)

    m_r, m_b, g_rrow, g_brow = _site_masks(he, we, (ry + 1) % 2, (rx + 1) % 2)
    g_e = green[1 : 1 + he, 1 : 1 + we]
    img = np.empty((he, we, 3), dtype=np.float64)
    img[:, :, 1] = g_e
    img[:, :, 0] = g_e + interp_diff(dr, m_r, g_rrow, g_brow)
    img[:, :, 2] = g_e + interp_diff(db, m_b, g_brow, g_rrow)
    return img


def demosaic_ahd(
    mosaic: BayerMosaic,
    median_passes: int = 2,
    return_direction: bool = False,
):
    """AHD reconstruction; ``median_passes`` counts 3x3 chroma median
    cleanup rounds. With ``return_direction`` the per-pixel direction map
    (0=horizontal, 1=vertical, 2=tie) is returned alongside the image."""
    if median_passes < 0:
        raise ValueError("median_passes must be >= 0")
    ry, rx = _r_parity(mosaic)
    h, w = mosaic.shape
    padded = np.pad(mosaic.data.astype(np.float64), 4, mode="reflect")

    cand = [_candidate(padded, h, w, ry, rx, horizontal) for horizontal in (True, False)]
    lab = [_rgb_to_lab(c) for c in cand]

    def shift(a, dy, dx):
        return a[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]

    offs = ((0, -1), (0, 1), (-1, 0), (1, 0))  # left, right, up, down
    ldiff = np.empty((2, 4, h, w))
    abdiff = np.empty((2, 4, h, w))
    for d in range(2):
        lc = shift(lab[d], 0, 0)
        for i, (dy, dx) in enumerate(offs):
            ln = shift(lab[d], dy, dx)
            ldiff[d, i] = np.abs(lc[..., 0] - ln[..., 0])
            abdiff[d, i] = (lc[..., 1] - ln[..., 1]) ** 2 + (lc[..., 2] - ln[..., 2]) ** 2

    # Adaptive level-set tolerances: tightest of the two along-direction spans.
    leps = np.minimum(np.maximum(ldiff[0, 0], ldiff[0, 1]), np.maximum(ldiff[1, 2], ldiff[1, 3]))
    abeps = np.minimum(
        np.maximum(abdiff[0, 0], abdiff[0, 1]), np.maximum(abdiff[1, 2], abdiff[1, 3])
    )
    homo = np.zeros((2, h, w))
    for d in range(2):
        for i in range(4):
            homo[d] += (ldiff[d, i] <= leps) & (abdiff[d, i] <= abeps)

    hs_h = _box3(homo[0])
    hs_v = _box3(homo[1])
    direction = np.zeros((h, w), dtype=np.int8)
    direction[hs_v > hs_h] = 1
    direction[hs_v == hs_h] = 2

    full_h = cand[0][1:-1, 1:-1]
    full_v = cand[1][1:-1, 1:-1]
    out = np.where(
        (direction == 1)[..., None],
        full_v,
        np.where((direction == 2)[..., None], (full_h + full_v) * 0.5, full_h),
    )

    for _ in range(median_passes):
        out = _chroma_median(out)

    out = out.astype(np.float32)
    chan = pattern_channel_map(mosaic.pattern, h, w)
    for c in range(3):
        m = chan == c
        out[:, :, c][m] = mosaic.data[m]
    if return_direction:
        return out, direction
    return out
