"""Pure-numpy reference implementations of the hot jet/Horner kernels.

A "jet" is a (L+1, M) complex array whose row k holds the k-th local Taylor
coefficient f^(k)(z_m)/k! at each of the M evaluation points.  All kernels
are pure functions of contiguous complex128 arrays; the numba backend in
``_numba`` implements the same signatures.
"""

import numpy as np

NAME = "numpy"


def poly_eval(coeffs, z):
    """Horner evaluation of an ascending-coefficient polynomial at points z."""
    acc = np.full(z.shape, coeffs[-1], dtype=np.complex128)
    for k in range(coeffs.shape[0] - 2, -1, -1):
        acc = acc * z + coeffs[k]
    return acc


def poly_jet(coeffs, z, L):
    """Jet of a polynomial at points z, truncated at order L."""
    m = z.shape[0]
    r = np.zeros((L + 1, m), dtype=np.complex128)
    for k in range(coeffs.shape[0] - 1, -1, -1):
        # multiply by the identity jet [z, 1], then add the coefficient
        for j in range(L, 0, -1):
            r[j] = r[j] * z + r[j - 1]
        r[0] = r[0] * z + coeffs[k]
    return r


def newton_eval(coeffs, nodes, z):
    """Horner evaluation of a Newton-form polynomial with the given nodes."""
    acc = np.full(z.shape, coeffs[-1], dtype=np.complex128)
    for k in range(coeffs.shape[0] - 2, -1, -1):
        acc = acc * (z - nodes[k]) + coeffs[k]
    return acc


def newton_jet(coeffs, nodes, z, L):
    """Jet of a Newton-form polynomial at points z, truncated at order L."""
    m = z.shape[0]
    r = np.zeros((L + 1, m), dtype=np.complex128)
    r[0] = coeffs[-1]
    for k in range(coeffs.shape[0] - 2, -1, -1):
        zk = z - nodes[k]
        for j in range(L, 0, -1):
            r[j] = r[j] * zk + r[j - 1]
        r[0] = r[0] * zk + coeffs[k]
    return r


def jet_mul(a, b):
    """Truncated Cauchy product of two jets of equal shape."""
    n, m = a.shape
    out = np.zeros((n, m), dtype=np.complex128)
    for k in range(n):
        for j in range(k + 1):
            out[k] += a[j] * b[k - j]
    return out


def jet_div(a, b):
    """Truncated series division a/b (b must not vanish at order zero)."""
    n, m = a.shape
    out = np.empty((n, m), dtype=np.complex128)
    inv0 = 1.0 / b[0]
    for k in range(n):
        acc = a[k].copy()
        for j in range(1, k + 1):
            acc -= b[j] * out[k - j]
        out[k] = acc * inv0
    return out


def blaschke_jet(lam, z, L):
    """Jet of the factor (lam - z)/(1 - conj(lam) z) at points z."""
    m = z.shape[0]
    lb = np.conj(lam)
    out = np.zeros((L + 1, m), dtype=np.complex128)
    u = 1.0 - lb * z
    out[0] = (lam - z) / u
    if L >= 1:
        g = (lam * lb - 1.0) / (u * u)
        out[1] = g
        for k in range(2, L + 1):
            g = g * (lb / u)
            out[k] = g
    return out


def cauchy_jet(zbar, z, L):
    """Jet of 1/(1 - zbar*z) at points z."""
    m = z.shape[0]
    out = np.empty((L + 1, m), dtype=np.complex128)
    u = 1.0 - zbar * z
    g = 1.0 / u
    out[0] = g
    for k in range(1, L + 1):
        g = g * (zbar / u)
        out[k] = g
    return out


def blaschke_prod_eval(lams, z):
    """Values of the full Blaschke product over the factor list."""
    acc = np.ones(z.shape, dtype=np.complex128)
    for lam in lams:
        acc *= (lam - z) / (1.0 - np.conj(lam) * z)
    return acc


def blaschke_prod_jet(lams, z, L):
    """Jet of the full Blaschke product, accumulated factor by factor."""
    m = z.shape[0]
    acc = np.zeros((L + 1, m), dtype=np.complex128)
    acc[0] = 1.0
    for lam in lams:
        fac = blaschke_jet(lam, z, L)
        acc = jet_mul(acc, fac)
    return acc
