# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels.

Same inputs, arithmetic, and accumulation order as ``fallback.py`` so the
two backends produce bit-identical results for the pure-arithmetic
kernels (demosaicking, median); bilateral may differ by exp() ulps.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs

cnp.import_array()


def bilinear_demosaic_padded(double[:, ::1] padded, int ry, int rx):
    cdef Py_ssize_t h = padded.shape[0] - 4
    cdef Py_ssize_t w = padded.shape[1] - 4
    out_arr = np.empty((h, w, 3), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t y, x, py, px
    cdef int yy, xx
    cdef double c, cross, diag, horiz, vert
    for y in range(h):
        py = y + 2
        yy = <int>(y & 1)
        for x in range(w):
            px = x + 2
            xx = <int>(x & 1)
            c = padded[py, px]
            cross = ((padded[py - 1, px] + padded[py + 1, px])
                     + (padded[py, px - 1] + padded[py, px + 1])) * 0.25
            diag = ((padded[py - 1, px - 1] + padded[py - 1, px + 1])
                    + (padded[py + 1, px - 1] + padded[py + 1, px + 1])) * 0.25
            horiz = (padded[py, px - 1] + padded[py, px + 1]) * 0.5
            vert = (padded[py - 1, px] + padded[py + 1, px]) * 0.5
            if yy == ry and xx == rx:            # R site
                out[y, x, 0] = c
                out[y, x, 1] = cross
                out[y, x, 2] = diag
            elif yy == 1 - ry and xx == 1 - rx:  # B site
                out[y, x, 0] = diag
                out[y, x, 1] = cross
                out[y, x, 2] = c
            elif yy == ry:                       # G on R row
                out[y, x, 0] = horiz
                out[y, x, 1] = c
                out[y, x, 2] = vert
            else:                                # G on B row
                out[y, x, 0] = vert
                out[y, x, 1] = c
                out[y, x, 2] = horiz
    return out_arr


def kodak_demosaic_padded(double[:, ::1] padded, int ry, int rx):
    cdef Py_ssize_t h = padded.shape[0] - 4
    cdef Py_ssize_t w = padded.shape[1] - 4
    cdef Py_ssize_t he = h + 2
    cdef Py_ssize_t we = w + 2
    green_arr = np.empty((he, we), dtype=np.float64)
    dr_arr = np.zeros((he, we), dtype=np.float64)
    db_arr = np.zeros((he, we), dtype=np.float64)
    cdef double[:, ::1] green = green_arr
    cdef double[:, ::1] dr = dr_arr
    cdef double[:, ::1] db = db_arr
    cdef Py_ssize_t i, j, pi, pj, y, x
    cdef int yy, xx, ery, erx
    cdef double l, r, u, d, dh, dv, g, c
    ery = (ry + 1) % 2
    erx = (rx + 1) % 2
    for i in range(he):
        pi = i + 1
        yy = <int>(i & 1)
        for j in range(we):
            pj = j + 1
            xx = <int>(j & 1)
            c = padded[pi, pj]
            if (yy == ery and xx == 1 - erx) or (yy == 1 - ery and xx == erx):
                green[i, j] = c  # G site
                continue
            l = padded[pi, pj - 1]
            r = padded[pi, pj + 1]
            u = padded[pi - 1, pj]
            d = padded[pi + 1, pj]
            dh = fabs(l - r)
            dv = fabs(u - d)
            if dh < dv:
                g = (l + r) * 0.5
            elif dv < dh:
                g = (u + d) * 0.5
            else:
                g = ((l + r) + (u + d)) * 0.25
            green[i, j] = g
            if yy == ery and xx == erx:
                dr[i, j] = c - g
            else:
                db[i, j] = c - g

    out_arr = np.empty((h, w, 3), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef double gi, vr, vb
    for y in range(h):
        i = y + 1
        yy = <int>(y & 1)
        for x in range(w):
            j = x + 1
            xx = <int>(x & 1)
            gi = green[i, j]
            out[y, x, 1] = gi
            if yy == ry and xx == rx:            # R site
                vr = padded[y + 2, x + 2] - gi
                vb = ((db[i - 1, j - 1] + db[i - 1, j + 1])
                      + (db[i + 1, j - 1] + db[i + 1, j + 1])) * 0.25
                out[y, x, 0] = padded[y + 2, x + 2]
                out[y, x, 2] = gi + vb
            elif yy == 1 - ry and xx == 1 - rx:  # B site
                vr = ((dr[i - 1, j - 1] + dr[i - 1, j + 1])
                      + (dr[i + 1, j - 1] + dr[i + 1, j + 1])) * 0.25
                out[y, x, 0] = gi + vr
                out[y, x, 2] = padded[y + 2, x + 2]
            elif yy == ry:                       # G on R row
                vr = (dr[i, j - 1] + dr[i, j + 1]) * 0.5
                vb = (db[i - 1, j] + db[i + 1, j]) * 0.5
                out[y, x, 0] = gi + vr
                out[y, x, 2] = gi + vb
            else:                                # G on B row
                vr = (dr[i - 1, j] + dr[i + 1, j]) * 0.5
                vb = (db[i, j - 1] + db[i, j + 1]) * 0.5
                out[y, x, 0] = gi + vr
                out[y, x, 2] = gi + vb
    return out_arr


def median_filter_padded(double[:, ::1] padded, int window):
    cdef int r = window // 2
    cdef Py_ssize_t h = padded.shape[0] - 2 * r
    cdef Py_ssize_t w = padded.shape[1] - 2 * r
    cdef int n = window * window
    out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    buf_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] buf = buf_arr
    cdef Py_ssize_t y, x
    cdef int dy, dx, k, m
    cdef double v
    for y in range(h):
        for x in range(w):
            k = 0
            for dy in range(window):
                for dx in range(window):
                    buf[k] = padded[y + dy, x + dx]
                    k += 1
            # insertion sort; n is small (<= 49 for window 7)
            for k in range(1, n):
                v = buf[k]
                m = k - 1
                while m >= 0 and buf[m] > v:
                    buf[m + 1] = buf[m]
                    m -= 1
                buf[m + 1] = v
            out[y, x] = buf[n // 2]
    return out_arr


def bilateral_filter_padded(double[:, :, ::1] padded, double[:, ::1] guide,
                            double[:, ::1] spatial, double inv_two_sigma_r2):
    cdef int r = spatial.shape[0] // 2
    cdef Py_ssize_t h = padded.shape[0] - 2 * r
    cdef Py_ssize_t w = padded.shape[1] - 2 * r
    out_arr = np.empty((h, w, 3), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t y, x
    cdef int dy, dx
    cdef double g0, gd, wgt, den, n0, n1, n2
    for y in range(h):
        for x in range(w):
            g0 = guide[y + r, x + r]
            den = 0.0
            n0 = 0.0
            n1 = 0.0
            n2 = 0.0
            for dy in range(-r, r + 1):
                for dx in range(-r, r + 1):
                    gd = guide[y + r + dy, x + r + dx] - g0
                    wgt = spatial[r + dy, r + dx] * exp(-(gd * gd) * inv_two_sigma_r2)
                    den += wgt
                    n0 += wgt * padded[y + r + dy, x + r + dx, 0]
                    n1 += wgt * padded[y + r + dy, x + r + dx, 1]
                    n2 += wgt * padded[y + r + dy, x + r + dx, 2]
            out[y, x, 0] = n0 / den
            out[y, x, 1] = n1 / den
            out[y, x, 2] = n2 / den
    return out_arr
