"""Pure numpy/Python fallbacks for the hot inner loops.

Same contracts as ``_series_numba``.  Scalar recurrences run as plain Python
float loops; array recurrences are vectorized across evaluation points with a
Python loop over the degree.  Expect roughly an order of magnitude slower
than the numba twins at large truncation orders (see benchmarks/).
"""

import math

import numpy as np


def radial_coefficients(alpha, beta, kappa, cos_r, L):
    out = np.empty(L)
    if L == 0:
        return out
    a = alpha + 1.0
    b = beta + 1.0
    z = float(cos_r)
    s = alpha + beta + 1.0
    sh2 = 0.5 * (1.0 - z)
    ch2 = 0.5 * (1.0 + z)
    w2 = sh2 ** (2.0 * alpha + 2.0) * ch2 ** (2.0 * beta + 2.0)
    Ml = (2.0 + s) * math.exp(
        math.lgamma(2.0) + math.lgamma(1.0 + s)
        - math.lgamma(2.0 + alpha) - math.lgamma(2.0 + beta)
    )
    p_prev = 1.0
    out[0] = kappa * Ml * w2
    if L == 1:
        return out
    p_cur = 0.5 * (a + b + 2.0) * z + 0.5 * (a - b)
    Ml = Ml * ((4.0 + s) / (2.0 + s)) * (2.0 * (1.0 + s)) / ((2.0 + alpha) * (2.0 + beta))
    out[1] = kappa / 4.0 * Ml * w2 * p_cur * p_cur
    for l in range(3, L + 1):
        Ml = Ml * ((2 * l + s) / (2 * l - 2 + s)) * (l * (l - 1 + s)) / ((l + alpha) * (l + beta))
        n = l - 1
        tn = 2.0 * n + a + b
        c1 = 2.0 * n * (n + a + b) * (tn - 2.0)
        c2 = (tn - 1.0) * (a * a - b * b)
        c3 = (tn - 2.0) * (tn - 1.0) * tn
        c4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * tn
        p_next = ((c2 + c3 * z) * p_cur - c4 * p_prev) / c1
        p_prev, p_cur = p_cur, p_next
        out[l - 1] = kappa / (l * l) * Ml * w2 * p_cur * p_cur
    return out


def zonal_series_pair(zs, coeffs, alpha, beta):
    zs = np.asarray(zs, dtype=float)
    L = len(coeffs)
    plus = np.zeros_like(zs)
    minus = np.zeros_like(zs)
    if L == 0:
        return plus, minus
    p_prev = np.ones_like(zs)
    p_cur = 0.5 * (alpha + beta + 2.0) * zs + 0.5 * (alpha - beta)
    norm_cur = alpha + 1.0
    phi = p_cur / norm_cur
    plus += coeffs[0] * phi
    minus += coeffs[0] * (1.0 - phi)
    for l in range(2, L + 1):
        tl = 2.0 * l + alpha + beta
        c1 = 2.0 * l * (l + alpha + beta) * (tl - 2.0)
        c2 = (tl - 1.0) * (alpha * alpha - beta * beta)
        c3 = (tl - 2.0) * (tl - 1.0) * tl
        c4 = 2.0 * (l + alpha - 1.0) * (l + beta - 1.0) * tl
        p_next = ((c2 + c3 * zs) * p_cur - c4 * p_prev) / c1
        p_prev, p_cur = p_cur, p_next
        norm_cur = norm_cur * (alpha + l) / l
        phi = p_cur / norm_cur
        plus += coeffs[l - 1] * phi
        minus += coeffs[l - 1] * (1.0 - phi)
    return plus, minus


def zonal_sum_table(zs, alpha, beta, L):
    zs = np.asarray(zs, dtype=float)
    out = np.zeros(L + 1)
    out[0] = len(zs)
    if L == 0 or len(zs) == 0:
        return out
    p_prev = np.ones_like(zs)
    p_cur = 0.5 * (alpha + beta + 2.0) * zs + 0.5 * (alpha - beta)
    norm_cur = alpha + 1.0
    out[1] = p_cur.sum() / norm_cur
    for l in range(2, L + 1):
        tl = 2.0 * l + alpha + beta
        c1 = 2.0 * l * (l + alpha + beta) * (tl - 2.0)
        c2 = (tl - 1.0) * (alpha * alpha - beta * beta)
        c3 = (tl - 2.0) * (tl - 1.0) * tl
        c4 = 2.0 * (l + alpha - 1.0) * (l + beta - 1.0) * tl
        p_next = ((c2 + c3 * zs) * p_cur - c4 * p_prev) / c1
        p_prev, p_cur = p_cur, p_next
        norm_cur = norm_cur * (alpha + l) / l
        out[l] = p_cur.sum() / norm_cur
    return out


def squared_poly_sums(z_nodes, w_nodes, alpha, beta, L):
    z = np.asarray(z_nodes, dtype=float)
    w = np.asarray(w_nodes, dtype=float)
    out = np.zeros(L)
    if L == 0 or len(z) == 0:
        return out
    p_prev = np.ones_like(z)
    out[0] = w.sum()
    if L == 1:
        return out
    p_cur = 0.5 * (alpha + beta + 2.0) * z + 0.5 * (alpha - beta)
    out[1] = (w * p_cur * p_cur).sum()
    for l in range(3, L + 1):
        n = l - 1
        tn = 2.0 * n + alpha + beta
        c1 = 2.0 * n * (n + alpha + beta) * (tn - 2.0)
        c2 = (tn - 1.0) * (alpha * alpha - beta * beta)
        c3 = (tn - 2.0) * (tn - 1.0) * tn
        c4 = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * tn
        p_next = ((c2 + c3 * z) * p_cur - c4 * p_prev) / c1
        p_prev, p_cur = p_cur, p_next
        out[l - 1] = (w * p_cur * p_cur).sum()
    return out
