"""Numba-jitted implementations of the hot jet/Horner kernels.

Same contracts as ``_numpy``; loops are fused per evaluation point so the
factor-by-factor jet products run without intermediate arrays.  Reductions
stay outside these kernels (per-point writes only) so results do not depend
on the parallel schedule.
"""

import numpy as np
from numba import njit, prange

NAME = "numba"

_OPTS = dict(cache=True, nogil=True)


@njit(parallel=True, **_OPTS)
def poly_eval(coeffs, z):
    m = z.shape[0]
    d = coeffs.shape[0]
    out = np.empty(m, dtype=np.complex128)
    for i in prange(m):
        zi = z[i]
        acc = coeffs[d - 1]
        for k in range(d - 2, -1, -1):
            acc = acc * zi + coeffs[k]
        out[i] = acc
    return out


@njit(parallel=True, **_OPTS)
def poly_jet(coeffs, z, L):
    m = z.shape[0]
    d = coeffs.shape[0]
    out = np.empty((L + 1, m), dtype=np.complex128)
    for i in prange(m):
        zi = z[i]
        r = np.zeros(L + 1, dtype=np.complex128)
        for k in range(d - 1, -1, -1):
            for j in range(L, 0, -1):
                r[j] = r[j] * zi + r[j - 1]
            r[0] = r[0] * zi + coeffs[k]
        for j in range(L + 1):
            out[j, i] = r[j]
    return out


@njit(parallel=True, **_OPTS)
def newton_eval(coeffs, nodes, z):
    m = z.shape[0]
    d = coeffs.shape[0]
    out = np.empty(m, dtype=np.complex128)
    for i in prange(m):
        zi = z[i]
        acc = coeffs[d - 1]
        for k in range(d - 2, -1, -1):
            acc = acc * (zi - nodes[k]) + coeffs[k]
        out[i] = acc
    return out


@njit(parallel=True, **_OPTS)
def newton_jet(coeffs, nodes, z, L):
    m = z.shape[0]
    d = coeffs.shape[0]
    out = np.empty((L + 1, m), dtype=np.complex128)
    for i in prange(m):
        zi = z[i]
        r = np.zeros(L + 1, dtype=np.complex128)
        r[0] = coeffs[d - 1]
        for k in range(d - 2, -1, -1):
            zk = zi - nodes[k]
            for j in range(L, 0, -1):
                r[j] = r[j] * zk + r[j - 1]
            r[0] = r[0] * zk + coeffs[k]
        for j in range(L + 1):
            out[j, i] = r[j]
    return out


@njit(parallel=True, **_OPTS)
def jet_mul(a, b):
    n, m = a.shape
    out = np.empty((n, m), dtype=np.complex128)
    for i in prange(m):
        for k in range(n):
            acc = 0.0 + 0.0j
            for j in range(k + 1):
                acc += a[j, i] * b[k - j, i]
            out[k, i] = acc
    return out


@njit(parallel=True, **_OPTS)
def jet_div(a, b):
    n, m = a.shape
    out = np.empty((n, m), dtype=np.complex128)
    for i in prange(m):
        inv0 = 1.0 / b[0, i]
        for k in range(n):
            acc = a[k, i]
            for j in range(1, k + 1):
                acc -= b[j, i] * out[k - j, i]
            out[k, i] = acc * inv0
    return out


@njit(parallel=True, **_OPTS)
def blaschke_jet(lam, z, L):
    m = z.shape[0]
    lb = lam.conjugate()
    out = np.zeros((L + 1, m), dtype=np.complex128)
    for i in prange(m):
        u = 1.0 - lb * z[i]
        out[0, i] = (lam - z[i]) / u
        if L >= 1:
            g = (lam * lb - 1.0) / (u * u)
            out[1, i] = g
            for k in range(2, L + 1):
                g = g * (lb / u)
                out[k, i] = g
    return out


@njit(parallel=True, **_OPTS)
def cauchy_jet(zbar, z, L):
    m = z.shape[0]
    out = np.empty((L + 1, m), dtype=np.complex128)
    for i in prange(m):
        u = 1.0 - zbar * z[i]
        g = 1.0 / u
        out[0, i] = g
        for k in range(1, L + 1):
            g = g * (zbar / u)
            out[k, i] = g
    return out


@njit(parallel=True, **_OPTS)
def blaschke_prod_eval(lams, z):
    n = lams.shape[0]
    m = z.shape[0]
    out = np.empty(m, dtype=np.complex128)
    for i in prange(m):
        zi = z[i]
        acc = 1.0 + 0.0j
        for t in range(n):
            lam = lams[t]
            acc *= (lam - zi) / (1.0 - lam.conjugate() * zi)
        out[i] = acc
    return out


@njit(parallel=True, **_OPTS)
def blaschke_prod_jet(lams, z, L):
    n = lams.shape[0]
    m = z.shape[0]
    out = np.empty((L + 1, m), dtype=np.complex128)
    for i in prange(m):
        zi = z[i]
        acc = np.zeros(L + 1, dtype=np.complex128)
        fac = np.zeros(L + 1, dtype=np.complex128)
        tmp = np.empty(L + 1, dtype=np.complex128)
        acc[0] = 1.0
        for t in range(n):
            lam = lams[t]
            lb = lam.conjugate()
            u = 1.0 - lb * zi
            fac[0] = (lam - zi) / u
            if L >= 1:
                g = (lam * lb - 1.0) / (u * u)
                fac[1] = g
                for k in range(2, L + 1):
                    g = g * (lb / u)
                    fac[k] = g
            for k in range(L, -1, -1):
                s = 0.0 + 0.0j
                for j in range(k + 1):
                    s += acc[j] * fac[k - j]
                tmp[k] = s
            for k in range(L + 1):
                acc[k] = tmp[k]
        for k in range(L + 1):
            out[k, i] = acc[k]
    return out
