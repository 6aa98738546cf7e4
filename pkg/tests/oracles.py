"""Independent brute-force scalar oracles for the filter kernels.

Everything here is written as plain per-pixel Python loops over float64
scalars, deliberately sharing no code with the vectorized or compiled
implementations. Expressions use the same operand association as the
kernel contracts specify, so the demosaic/median/defect oracles are
exact; statistical oracles (SSIM, Gaussian blur) are exact up to
accumulation order.
"""

from __future__ import annotations

import math

import numpy as np

_PATTERN_CELL = {
    "RGGB": ((0, 1), (1, 2)),
    "BGGR": ((2, 1), (1, 0)),
    "GRBG": ((1, 0), (2, 1)),
    "GBRG": ((1, 2), (0, 1)),
}


def cfa_channel(pattern: str, y: int, x: int) -> int:
    return _PATTERN_CELL[pattern][y % 2][x % 2]


def _reflect_index(i: int, n: int) -> int:
    """Odd (mirror-without-repeat) reflection, np.pad mode='reflect'."""
    if n == 1:
        return 0
    period = 2 * (n - 1)
    i = i % period
    if i < 0:
        i += period
    return i if i < n else period - i


def _get(m: np.ndarray, y: int, x: int) -> float:
    return float(m[_reflect_index(y, m.shape[0]), _reflect_index(x, m.shape[1])])


def oracle_bilinear(data: np.ndarray, pattern: str) -> np.ndarray:
    h, w = data.shape
    m = data.astype(np.float64)
    out = np.empty((h, w, 3), dtype=np.float64)
    for y in range(h):
        for x in range(w):
            own = cfa_channel(pattern, y, x)
            ctr = _get(m, y, x)
            cross = ((_get(m, y - 1, x) + _get(m, y + 1, x)) + (_get(m, y, x - 1) + _get(m, y, x + 1))) * 0.25
            diag = ((_get(m, y - 1, x - 1) + _get(m, y - 1, x + 1)) + (_get(m, y + 1, x - 1) + _get(m, y + 1, x + 1))) * 0.25
            horiz = (_get(m, y, x - 1) + _get(m, y, x + 1)) * 0.5
            vert = (_get(m, y - 1, x) + _get(m, y + 1, x)) * 0.5
            for c in range(3):
                if c == own:
                    out[y, x, c] = ctr
                elif own == 1:
                    # G site: the missing color lives in this row or column.
                    row_chan = cfa_channel(pattern, y, x - 1)
                    out[y, x, c] = horiz if c == row_chan else vert
                elif c == 1:
                    out[y, x, c] = cross
                else:
                    out[y, x, c] = diag
    out32 = out.astype(np.float32)
    for y in range(h):
        for x in range(w):
            out32[y, x, cfa_channel(pattern, y, x)] = data[y, x]
    return out32


def oracle_kodak(data: np.ndarray, pattern: str) -> np.ndarray:
    h, w = data.shape
    m = data.astype(np.float64)

    def green_at(y: int, x: int) -> float:
        if cfa_channel(pattern, y, x) == 1:
            return _get(m, y, x)
        left, right = _get(m, y, x - 1), _get(m, y, x + 1)
        up, down = _get(m, y - 1, x), _get(m, y + 1, x)
        dh = abs(left - right)
        dv = abs(up - down)
        if dh < dv:
            return (left + right) * 0.5
        if dv < dh:
            return (up + down) * 0.5
        return ((left + right) + (up + down)) * 0.25

    def diff_at(y: int, x: int, chan: int) -> float:
        return _get(m, y, x) - green_at(y, x) if cfa_channel(pattern, y, x) == chan else 0.0

    out = np.empty((h, w, 3), dtype=np.float64)
    for y in range(h):
        for x in range(w):
            own = cfa_channel(pattern, y, x)
            g = green_at(y, x)
            out[y, x, 1] = g
            for chan in (0, 2):
                if own == chan:
                    out[y, x, chan] = _get(m, y, x)
                    continue
                if own == 1:
                    row_chan = cfa_channel(pattern, y, x - 1)
                    if chan == row_chan:
                        d = (diff_at(y, x - 1, chan) + diff_at(y, x + 1, chan)) * 0.5
                    else:
                        d = (diff_at(y - 1, x, chan) + diff_at(y + 1, x, chan)) * 0.5
                else:
                    d = ((diff_at(y - 1, x - 1, chan) + diff_at(y - 1, x + 1, chan))
                         + (diff_at(y + 1, x - 1, chan) + diff_at(y + 1, x + 1, chan))) * 0.25
                out[y, x, chan] = g + d
    out32 = out.astype(np.float32)
    for y in range(h):
        for x in range(w):
            out32[y, x, cfa_channel(pattern, y, x)] = data[y, x]
    return out32


def oracle_median(plane: np.ndarray, window: int) -> np.ndarray:
    h, w = plane.shape
    r = window // 2
    m = plane.astype(np.float64)
    out = np.empty((h, w), dtype=np.float64)
    for y in range(h):
        for x in range(w):
            vals = sorted(_get(m, y + dy, x + dx) for dy in range(-r, r + 1) for dx in range(-r, r + 1))
            out[y, x] = vals[(window * window) // 2]
    return out


_RB_NEIGHBORS = ((-2, -2), (-2, 0), (-2, 2), (0, -2), (0, 2), (2, -2), (2, 0), (2, 2))
_G_NEIGHBORS = ((-1, -1), (-1, 1), (1, -1), (1, 1), (0, -2), (0, 2), (-2, 0), (2, 0))


def oracle_defect(data: np.ndarray, pattern: str, threshold: float) -> np.ndarray:
    h, w = data.shape
    m = data.astype(np.float64)
    out = data.copy()
    for y in range(h):
        for x in range(w):
            offs = _G_NEIGHBORS if cfa_channel(pattern, y, x) == 1 else _RB_NEIGHBORS
            vals = sorted(_get(m, y + dy, x + dx) for dy, dx in offs)
            med = (vals[3] + vals[4]) * 0.5
            if abs(float(m[y, x]) - med) > threshold:
                out[y, x] = np.float32(med)
    return out


def oracle_ssim(x: np.ndarray, y: np.ndarray, dynamic_range: float = 1.0) -> float:
    """Direct per-window SSIM on already-single-plane inputs."""
    win, sigma, k1, k2 = 11, 1.5, 0.01, 0.03
    r = win // 2
    d = np.arange(-r, r + 1, dtype=np.float64)
    g = np.exp(-(d * d) / (2.0 * sigma**2))
    wgt = np.outer(g, g)
    wgt /= wgt.sum()
    c1 = (k1 * dynamic_range) ** 2
    c2 = (k2 * dynamic_range) ** 2
    x = x.astype(np.float64)
    y = y.astype(np.float64)
    h, w = x.shape
    vals = []
    for i in range(r, h - r):
        for j in range(r, w - r):
            wx = x[i - r : i + r + 1, j - r : j + r + 1]
            wy = y[i - r : i + r + 1, j - r : j + r + 1]
            mx = float((wgt * wx).sum())
            my = float((wgt * wy).sum())
            vx = float((wgt * (wx - mx) ** 2).sum())
            vy = float((wgt * (wy - my) ** 2).sum())
            cxy = float((wgt * (wx - mx) * (wy - my)).sum())
            vals.append(((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2)))
    return float(np.mean(vals))


def oracle_gaussian_window_blur(img: np.ndarray, sigma_spatial: float, radius: int) -> np.ndarray:
    """Truncated, per-pixel-normalized Gaussian convolution with mirror
    border: the sigma_range -> infinity limit of the bilateral filter."""
    h, w = img.shape[:2]
    x = img.astype(np.float64)
    out = np.zeros_like(x)
    for y in range(h):
        for xx in range(w):
            acc = np.zeros(3)
            wsum = 0.0
            for dy in range(-radius, radius + 1):
                for dx in range(-radius, radius + 1):
                    wgt = math.exp(-(dy * dy + dx * dx) / (2.0 * sigma_spatial**2))
                    iy = _reflect_index(y + dy, h)
                    ix = _reflect_index(xx + dx, w)
                    acc += wgt * x[iy, ix]
                    wsum += wgt
            out[y, xx] = acc / wsum
    return out


def oracle_haar2d(img: np.ndarray, levels: int) -> np.ndarray:
    """Multilevel orthonormal Haar analysis via explicit 2x2 block butterflies."""
    a = img.astype(np.float64).copy()
    h, w = a.shape[:2]
    ch, cw = h, w
    for _ in range(levels):
        band = a[:ch, :cw].copy()
        nh, nw = ch // 2, cw // 2
        nxt = np.empty_like(band)
        for i in range(nh):
            for j in range(cw):
                nxt[i, j] = (band[2 * i, j] + band[2 * i + 1, j]) / math.sqrt(2.0)
                nxt[nh + i, j] = (band[2 * i, j] - band[2 * i + 1, j]) / math.sqrt(2.0)
        band = nxt.copy()
        for i in range(ch):
            for j in range(nw):
                nxt[i, j] = (band[i, 2 * j] + band[i, 2 * j + 1]) / math.sqrt(2.0)
                nxt[i, nw + j] = (band[i, 2 * j] - band[i, 2 * j + 1]) / math.sqrt(2.0)
        a[:ch, :cw] = nxt
        ch, cw = nh, nw
    return a
