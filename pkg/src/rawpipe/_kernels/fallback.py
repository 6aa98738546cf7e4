"""Pure-numpy implementations of the hot kernels.

All kernels take mirror-padded float64 inputs prepared by the callers in
``rawpipe.demosaic`` / ``rawpipe.denoise`` and return float64; the caller
casts to float32 and re-imposes sampled-site passthrough where required.
Arithmetic expressions and accumulation order match the compiled
extension exactly.
"""

from __future__ import annotations

import numpy as np


def _site_masks(h: int, w: int, ry: int, rx: int):
    """Boolean masks over an (h, w) grid for R sites, B sites, G sites on
    R rows, and G sites on B rows, given the parity of R sites."""
    yy, xx = np.meshgrid(np.arange(h) % 2, np.arange(w) % 2, indexing="ij")
    m_r = (yy == ry) & (xx == rx)
    m_b = (yy == 1 - ry) & (xx == 1 - rx)
    g_rrow = (yy == ry) & (xx == 1 - rx)
    g_brow = (yy == 1 - ry) & (xx == rx)
    return m_r, m_b, g_rrow, g_brow


def bilinear_demosaic_padded(padded: np.ndarray, ry: int, rx: int) -> np.ndarray:
    """Bilinear demosaic of a 2-pixel-padded mosaic; output (H, W, 3)."""
    hp, wp = padded.shape
    h, w = hp - 4, wp - 4

    def v(dy: int, dx: int) -> np.ndarray:
        return padded[2 + dy : 2 + dy + h, 2 + dx : 2 + dx + w]

    center = v(0, 0)
    cross = ((v(-1, 0) + v(1, 0)) + (v(0, -1) + v(0, 1))) * 0.25
    diag = ((v(-1, -1) + v(-1, 1)) + (v(1, -1) + v(1, 1))) * 0.25
    horiz = (v(0, -1) + v(0, 1)) * 0.5
    vert = (v(-1, 0) + v(1, 0)) * 0.5

    m_r, m_b, g_rrow, g_brow = _site_masks(h, w, ry, rx)
    out = np.empty((h, w, 3), dtype=np.float64)
    out[:, :, 0] = np.select([m_r, g_rrow, g_brow], [center, horiz, vert], diag)
    out[:, :, 1] = np.where(m_r | m_b, cross, center)
    out[:, :, 2] = np.select([m_b, g_brow, g_rrow], [center, horiz, vert], diag)
    return out


def kodak_demosaic_padded(padded: np.ndarray, ry: int, rx: int) -> np.ndarray:
    """Gradient-directed green, color-difference chroma; 2-pixel pad."""
    hp, wp = padded.shape
    h, w = hp - 4, wp - 4
    he, we = h + 2, w + 2  # extended region: interior plus a 1-pixel ring

    # Green over the extended region (padded coords [1, h+3) x [1, w+3)).
    ctr = padded[1 : 1 + he, 1 : 1 + we]
    left = padded[1 : 1 + he, 0:we]
    right = padded[1 : 1 + he, 2 : 2 + we]
    up = padded[0:he, 1 : 1 + we]
    down = padded[2 : 2 + he, 1 : 1 + we]
    dh = np.abs(left - right)
    dv = np.abs(up - down)
    gh = (left + right) * 0.5
    gv = (up + down) * 0.5
    gavg = ((left + right) + (up + down)) * 0.25
    g_dir = np.select([dh < dv, dv < dh], [gh, gv], gavg)

    # Extended-region parity: coordinate (i, j) here is unpadded (i-1, j-1).
    m_r_e, m_b_e, g_rrow_e, g_brow_e = _site_masks(he, we, (ry + 1) % 2, (rx + 1) % 2)
    m_g_e = g_rrow_e | g_brow_e
    green = np.where(m_g_e, ctr, g_dir)

    dr = np.where(m_r_e, ctr - green, 0.0)
    db = np.where(m_b_e, ctr - green, 0.0)

    def interp_diff(d: np.ndarray, on_sites, g_samerow, g_otherrow):
        def v(dy: int, dx: int) -> np.ndarray:
            return d[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]

        horiz = (v(0, -1) + v(0, 1)) * 0.5
        vert = (v(-1, 0) + v(1, 0)) * 0.5
        diag = ((v(-1, -1) + v(-1, 1)) + (v(1, -1) + v(1, 1))) * 0.25
        return np.select([on_sites, g_samerow, g_otherrow], [v(0, 0), horiz, vert], diag)

    m_r, m_b, g_rrow, g_brow = _site_masks(h, w, ry, rx)
    g_int = green[1 : 1 + h, 1 : 1 + w]
    out = np.empty((h, w, 3), dtype=np.float64)
    out[:, :, 1] = g_int
    out[:, :, 0] = g_int + interp_diff(dr, m_r, g_rrow, g_brow)
    out[:, :, 2] = g_int + interp_diff(db, m_b, g_brow, g_rrow)
    # Exact passthrough at own-channel sites.
    ctr_int = padded[2 : 2 + h, 2 : 2 + w]
    out[:, :, 0][m_r] = ctr_int[m_r]
    out[:, :, 2][m_b] = ctr_int[m_b]
    return out


def median_filter_padded(padded: np.ndarray, window: int) -> np.ndarray:
    """Median over window x window; ``padded`` carries window//2 margin."""
    r = window // 2
    h, w = padded.shape[0] - 2 * r, padded.shape[1] - 2 * r
    win = np.lib.stride_tricks.sliding_window_view(padded, (window, window))
    win = win.reshape(h, w, window * window)
    return np.sort(win, axis=-1)[:, :, (window * window) // 2]


def bilateral_filter_padded(
    padded: np.ndarray,
    guide: np.ndarray,
    spatial: np.ndarray,
    inv_two_sigma_r2: float,
) -> np.ndarray:
    """Bilateral filter; ``guide`` is the padded luma plane, ``spatial`` the
    (2r+1)^2 spatial weight table. Accumulates offsets row-major, matching
    the compiled loop order."""
    r = spatial.shape[0] // 2
    h, w = padded.shape[0] - 2 * r, padded.shape[1] - 2 * r
    g0 = guide[r : r + h, r : r + w]
    num = np.zeros((h, w, 3), dtype=np.float64)
    den = np.zeros((h, w), dtype=np.float64)
    for dy in range(-r, r + 1):
        for dx in range(-r, r + 1):
            gd = guide[r + dy : r + dy + h, r + dx : r + dx + w] - g0
            wgt = spatial[r + dy, r + dx] * np.exp(-(gd * gd) * inv_two_sigma_r2)
            den += wgt
            num += wgt[:, :, None] * padded[r + dy : r + dy + h, r + dx : r + dx + w, :]
    return num / den[:, :, None]
