"""Numba implementations of the hot inner loops.

Every function here has a drop-in twin in ``_series_numpy``; the active set
is chosen once at import time by :mod:`geodisc.backend`.  All loops advance
the standard Jacobi three-term recurrence degree by degree, so they are
sequential in ``l`` but cheap per step.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def radial_coefficients(alpha, beta, kappa, cos_r, L):
    """Coefficients kappa * l^-2 * M_l * a_l(r) for l = 1..L at fixed radius.

    a_l(r) = (sin r/2)^(2d) (cos r/2)^(2d0) * P^(alpha+1,beta+1)_{l-1}(cos r)^2
    with d = 2 alpha + 2, d0 = 2 beta + 2.  M_l is advanced by its ratio
    recurrence to avoid forming large gamma values.
    """
    out = np.empty(L)
    if L == 0:
        return out
    a = alpha + 1.0
    b = beta + 1.0
    z = cos_r
    s = alpha + beta + 1.0
    sh2 = 0.5 * (1.0 - z)
    ch2 = 0.5 * (1.0 + z)
    d = 2.0 * alpha + 2.0
    d0 = 2.0 * beta + 2.0
    w2 = sh2 ** d * ch2 ** d0
    Ml = (2.0 + s) * math.exp(
        math.lgamma(2.0) + math.lgamma(1.0 + s)
        - math.lgamma(2.0 + alpha) - math.lgamma(2.0 + beta)
    )
    p_prev = 1.0
    out[0] = kappa * Ml * w2 * p_prev * p_prev
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


@njit(cache=True, nogil=True)
def zonal_series_pair(zs, coeffs, alpha, beta):
    """sum_l c_l Phi_l(z) and sum_l c_l (1 - Phi_l(z)) for each z.

    Phi_l(z) = P^(alpha,beta)_l(z) / P^(alpha,beta)_l(1); coeffs[l-1] = c_l.
    Degree loop outermost so the recurrence constants are hoisted and the
    inner sweep over evaluation points vectorizes.
    """
    n = zs.shape[0]
    L = coeffs.shape[0]
    plus = np.zeros(n)
    minus = np.zeros(n)
    if L == 0 or n == 0:
        return plus, minus
    p_prev = np.ones(n)
    p_cur = np.empty(n)
    for i in range(n):
        p_cur[i] = 0.5 * (alpha + beta + 2.0) * zs[i] + 0.5 * (alpha - beta)
    norm_cur = alpha + 1.0
    c0 = coeffs[0]
    for i in range(n):
        phi = p_cur[i] / norm_cur
        plus[i] = c0 * phi
        minus[i] = c0 * (1.0 - phi)
    for l in range(2, L + 1):
        tl = 2.0 * l + alpha + beta
        inv_c1 = 1.0 / (2.0 * l * (l + alpha + beta) * (tl - 2.0))
        c2 = (tl - 1.0) * (alpha * alpha - beta * beta)
        c3 = (tl - 2.0) * (tl - 1.0) * tl
        c4 = 2.0 * (l + alpha - 1.0) * (l + beta - 1.0) * tl
        norm_cur = norm_cur * (alpha + l) / l
        cl = coeffs[l - 1]
        scale = cl / norm_cur
        for i in range(n):
            p_next = ((c2 + c3 * zs[i]) * p_cur[i] - c4 * p_prev[i]) * inv_c1
            p_prev[i] = p_cur[i]
            p_cur[i] = p_next
            plus[i] += scale * p_next
            minus[i] += cl - scale * p_next
    return plus, minus


@njit(cache=True, nogil=True)
def zonal_sum_table(zs, alpha, beta, L):
    """table[l] = sum_i Phi_l(z_i) for l = 0..L."""
    out = np.zeros(L + 1)
    n = zs.shape[0]
    out[0] = n
    if L == 0 or n == 0:
        return out
    p_prev = np.ones(n)
    p_cur = np.empty(n)
    acc = 0.0
    for i in range(n):
        p_cur[i] = 0.5 * (alpha + beta + 2.0) * zs[i] + 0.5 * (alpha - beta)
        acc += p_cur[i]
    norm_cur = alpha + 1.0
    out[1] = acc / norm_cur
    for l in range(2, L + 1):
        tl = 2.0 * l + alpha + beta
        inv_c1 = 1.0 / (2.0 * l * (l + alpha + beta) * (tl - 2.0))
        c2 = (tl - 1.0) * (alpha * alpha - beta * beta)
        c3 = (tl - 2.0) * (tl - 1.0) * tl
        c4 = 2.0 * (l + alpha - 1.0) * (l + beta - 1.0) * tl
        acc = 0.0
        for i in range(n):
            p_next = ((c2 + c3 * zs[i]) * p_cur[i] - c4 * p_prev[i]) * inv_c1
            p_prev[i] = p_cur[i]
            p_cur[i] = p_next
            acc += p_next
        norm_cur = norm_cur * (alpha + l) / l
        out[l] = acc / norm_cur
    return out


@njit(cache=True, nogil=True)
def squared_poly_sums(z_nodes, w_nodes, alpha, beta, L):
    """A[l] = sum_q w_q * P^(alpha,beta)_{l-1}(z_q)^2 for l = 1..L."""
    out = np.zeros(L)
    m = z_nodes.shape[0]
    if L == 0 or m == 0:
        return out
    acc = 0.0
    for q in range(m):
        acc += w_nodes[q]
    out[0] = acc
    if L == 1:
        return out
    p_prev = np.ones(m)
    p_cur = np.empty(m)
    acc = 0.0
    for q in range(m):
        p_cur[q] = 0.5 * (alpha + beta + 2.0) * z_nodes[q] + 0.5 * (alpha - beta)
        acc += w_nodes[q] * p_cur[q] * p_cur[q]
    out[1] = acc
    for l in range(3, L + 1):
        k = l - 1
        tk = 2.0 * k + alpha + beta
        inv_c1 = 1.0 / (2.0 * k * (k + alpha + beta) * (tk - 2.0))
        c2 = (tk - 1.0) * (alpha * alpha - beta * beta)
        c3 = (tk - 2.0) * (tk - 1.0) * tk
        c4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * tk
        acc = 0.0
        for q in range(m):
            p_next = ((c2 + c3 * z_nodes[q]) * p_cur[q] - c4 * p_prev[q]) * inv_c1
            p_prev[q] = p_cur[q]
            p_cur[q] = p_next
            acc += w_nodes[q] * p_next * p_next
        out[l - 1] = acc
    return out
