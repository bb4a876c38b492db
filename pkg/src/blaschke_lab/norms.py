"""Quadrature engines: Hardy/Bergman/Bloch norms, pairings, fractional derivative.

Boundary integrals use the trapezoid rule on power-of-two circle grids (it is
spectrally accurate for functions analytic across the circle); area integrals
use a Gauss-Jacobi radial rule in t = |z|^2 tensored with circle grids.  Every
norm returns a :class:`NormEstimate` carrying the last refinement delta.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, roots_jacobi

from . import funcexpr as fe
from .errors import QuadratureConvergenceError, ValidationError

_CIRCLE_CAP = 2**22
_ANGULAR_CAP = 2**20
_RADIAL_CAP = 2**14
_CHUNK = 2**21


def _pow2_at_least(x):
    return 1 << max(0, int(math.ceil(x)) - 1).bit_length()


@dataclass(frozen=True)
class NormEstimate:
    """A computed norm plus the difference between the last two refinements."""

    value: float
    error_est: float

    def __float__(self):
        return self.value


class CircleGrid:
    """M equispaced nodes on the unit circle carrying weight 1/M each."""

    __slots__ = ("m", "nodes")

    def __init__(self, m):
        m = int(m)
        if m < 1 or m & (m - 1):
            raise ValidationError("circle grid size must be a power of two")
        self.m = m
        nodes = np.exp(2j * np.pi * np.arange(m) / m)
        nodes.flags.writeable = False
        self.nodes = nodes

    @property
    def weight(self):
        return 1.0 / self.m


class DiskQuadrature:
    """Tensor rule for integrals against (1 - |z|^2)^beta dA (normalized area).

    Radially a Gauss-Jacobi rule in t = |z|^2 with weight (1 - t)^beta,
    angularly a circle grid of ``angular`` points per radius.
    """

    __slots__ = ("beta", "radial_nodes", "radial_weights", "angular", "_circle")

    def __init__(self, beta, radial, angular):
        beta = float(beta)
        if beta <= -1:
            raise ValidationError("weight exponent must exceed -1")
        x, w = roots_jacobi(int(radial), beta, 0.0)
        t = 0.5 * (x + 1.0)
        w = w * 0.5 ** (beta + 1.0)
        total = float(np.sum(w))
        if abs(total - 1.0 / (beta + 1.0)) > 1e-12 * (1.0 / (beta + 1.0)):
            raise ValidationError("Gauss-Jacobi weights failed the mass check")
        t.flags.writeable = False
        w.flags.writeable = False
        self.beta = beta
        self.radial_nodes = t
        self.radial_weights = w
        self._circle = CircleGrid(angular)
        self.angular = self._circle.m

    def integrate(self, fn):
        """Integrate fn(z) (vectorised, scalar-valued) over the weighted disk.

        Returns sum_i w_i * mean_theta fn(sqrt(t_i) e^{i theta}); complex
        results are supported (used by the area pairing).
        """
        return self.integrate_with_abs(fn)[0]

    def integrate_with_abs(self, fn):
        """As :meth:`integrate`, also returning the integral of |fn|."""
        rho = np.sqrt(self.radial_nodes)
        circle = self._circle.nodes
        m = self.angular
        rows = max(1, _CHUNK // m)
        total = 0.0 + 0.0j
        mass = 0.0
        for lo in range(0, rho.size, rows):
            hi = min(lo + rows, rho.size)
            pts = np.ascontiguousarray(
                (rho[lo:hi, None] * circle[None, :]).reshape(-1)
            )
            vals = np.asarray(fn(pts)).reshape(hi - lo, m)
            w = self.radial_weights[lo:hi]
            total += complex(np.sum(w * vals.mean(axis=1)))
            mass += float(np.sum(w * np.abs(vals).mean(axis=1)))
        return total, mass


# ---------------------------------------------------------------------------
# boundary norms


def hardy_norm(f, p, tol=1e-9, start=None):
    """H^p norm by trapezoid quadrature with grid doubling; rejects p = inf."""
    p = float(p)
    if math.isinf(p):
        raise ValidationError("hardy_norm handles finite p only; use sup_norm")
    if p < 1:
        raise ValidationError("hardy_norm needs p >= 1")
    if start is None:
        hint = fe.bandwidth_hint(f) * max(1.0, p / 2.0)
        m = _pow2_at_least(min(max(4096, 8 * hint), _CIRCLE_CAP))
    else:
        m = int(start)
    prev = None
    while m <= _CIRCLE_CAP:
        grid = CircleGrid(m)
        val = float(np.mean(np.abs(fe.values(f, grid.nodes)) ** p)) ** (1.0 / p)
        if prev is not None and abs(val - prev) <= tol * max(val, 1e-300):
            return NormEstimate(val, abs(val - prev))
        prev = val
        m *= 2
    raise QuadratureConvergenceError("hardy_norm did not stabilise below the cap")


def sup_norm(f, scale_hint=1.0):
    """Sup norm on the closed disk: boundary grid plus parabolic refinement."""
    scale_hint = max(float(scale_hint), 1.0)
    m = _pow2_at_least(
        min(max(4096, 64 * scale_hint, 4 * fe.bandwidth_hint(f)), _ANGULAR_CAP)
    )
    grid = CircleGrid(m)
    mags = np.abs(fe.values(f, grid.nodes))
    peaks = (mags >= np.roll(mags, 1)) & (mags >= np.roll(mags, -1))
    idx = np.nonzero(peaks)[0]
    if idx.size == 0:
        idx = np.array([int(np.argmax(mags))])
    top = idx[np.argsort(mags[idx])[-8:]]

    theta = 2.0 * np.pi * top / m
    h = np.full(theta.shape, 2.0 * np.pi / m)
    best = float(np.max(mags))
    delta_last = 0.0
    for _ in range(48):
        offsets = np.array([-1.0, 0.0, 1.0])
        pts = np.exp(1j * (theta[:, None] + h[:, None] * offsets[None, :]))
        vals = np.abs(fe.values(f, np.ascontiguousarray(pts.reshape(-1))))
        vals = vals.reshape(-1, 3)
        fm, f0, fp = vals[:, 0], vals[:, 1], vals[:, 2]
        denom = fm - 2.0 * f0 + fp
        step = np.where(
            denom < -1e-300, 0.5 * h * (fm - fp) / np.where(denom == 0, 1, denom), 0.0
        )
        theta = theta + np.clip(step, -h, h)
        h = h * 0.5
        new_best = max(best, float(np.max(vals)))
        delta_last = new_best - best
        best = new_best
        if h[0] < 1e-15:
            break
    return NormEstimate(best, max(delta_last, best * 1e-15))


def bergman_norm(f, p, beta, tol=1e-8):
    """A^p(beta) norm by adaptive Gauss-Jacobi x trapezoid tensor quadrature."""
    p = float(p)
    beta = float(beta)
    if not (p >= 1 and math.isfinite(p)):
        raise ValidationError("bergman_norm needs finite p >= 1")
    if beta <= -1:
        raise ValidationError("bergman_norm needs beta > -1")

    def integral(k, m):
        quad = DiskQuadrature(beta, k, m)
        return float(quad.integrate(lambda z: np.abs(fe.values(f, z)) ** p).real)

    hint = fe.bandwidth_hint(f) * max(1.0, p / 2.0)
    m = _pow2_at_least(min(max(512, 2 * hint), _ANGULAR_CAP))
    k = 48
    cur = integral(k, m)
    err_ang = err_rad = math.inf
    for _ in range(64):
        if err_ang > tol:
            nxt = integral(k, 2 * m)
            err_ang = abs(nxt - cur) / max(abs(nxt), 1e-300)
            if err_ang > tol:
                m *= 2
                cur = nxt
                err_rad = math.inf
                if m > _ANGULAR_CAP:
                    raise QuadratureConvergenceError("angular refinement exceeded cap")
                continue
        nxt = integral(2 * k, m)
        err_rad = abs(nxt - cur) / max(abs(nxt), 1e-300)
        if err_rad > tol:
            k *= 2
            cur = nxt
            err_ang = math.inf
            if k > _RADIAL_CAP:
                raise QuadratureConvergenceError("radial refinement exceeded cap")
            continue
        value = cur ** (1.0 / p)
        return NormEstimate(value, value * max(err_ang, err_rad) / p)
    raise QuadratureConvergenceError("bergman_norm refinement loop did not settle")


def bloch_seminorm(f, alpha, tol=1e-7):
    """sup |f'(z)| (1-|z|)^alpha over dyadic circles with local refinement."""
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError("bloch_seminorm needs alpha in [0, 1]")
    df = fe.Derivative(f, 1)
    m = _pow2_at_least(min(max(2048, 4 * fe.bandwidth_hint(f)), 2**16))
    grid = CircleGrid(m)

    def circle_sup(rho):
        vals = np.abs(fe.values(df, np.ascontiguousarray(rho * grid.nodes)))
        return float(np.max(vals)) * (1.0 - rho) ** alpha

    radii = [0.0] if alpha > 0 else [0.0, 1.0]
    best = max(circle_sup(r) for r in radii)
    last_gain = 0.0
    j = 1
    stall = 0
    while j <= 48:
        rho = 1.0 - 0.5**j
        val = circle_sup(rho)
        last_gain = max(val - best, 0.0)
        best = max(best, val)
        stall = stall + 1 if val < best - tol * best else 0
        if stall >= 4 and j >= 8:
            break
        j += 1
    return NormEstimate(best, max(last_gain, best * 1e-12))


# ---------------------------------------------------------------------------
# coefficient operators and pairings


def frac_diff(coeffs, alpha):
    """Coefficient multipliers Gamma(m+2+alpha) / ((m+1)! Gamma(2+alpha))."""
    alpha = float(alpha)
    if alpha <= -1:
        raise ValidationError("frac_diff needs alpha > -1")
    c = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128))
    m = np.arange(c.size, dtype=np.float64)
    mult = np.exp(gammaln(m + 2.0 + alpha) - gammaln(m + 2.0) - gammaln(2.0 + alpha))
    return c * mult


def cauchy_pairing(h, g, tol=1e-10):
    """Boundary inner product int h conj(g) dm by FFT-grid refinement."""
    hint = fe.bandwidth_hint(h) + fe.bandwidth_hint(g)
    m = _pow2_at_least(min(max(4096, 4 * hint), _CIRCLE_CAP))
    prev = None
    while m <= _CIRCLE_CAP:
        grid = CircleGrid(m)
        hv = fe.values(h, grid.nodes)
        gv = fe.values(g, grid.nodes)
        val = complex(np.mean(hv * np.conj(gv)))
        scale = math.sqrt(
            float(np.mean(np.abs(hv) ** 2)) * float(np.mean(np.abs(gv) ** 2))
        )
        if prev is not None and abs(val - prev) <= tol * max(abs(val), scale, 1e-300):
            return val
        prev = val
        m *= 2
    raise QuadratureConvergenceError("cauchy_pairing did not stabilise below the cap")


def bergman_pairing(h, g, tol=1e-9):
    """Area inner product int h conj(g) dA over the unweighted disk."""

    def integral(k, m):
        quad = DiskQuadrature(0.0, k, m)
        return quad.integrate_with_abs(
            lambda z: fe.values(h, z) * np.conj(fe.values(g, z))
        )

    hint = fe.bandwidth_hint(h) + fe.bandwidth_hint(g)
    m = _pow2_at_least(min(max(512, 2 * hint), _ANGULAR_CAP))
    k = 48
    cur, scale = integral(k, m)
    for _ in range(64):
        nxt_a, scale = integral(k, 2 * m)
        if abs(nxt_a - cur) > tol * max(abs(nxt_a), scale, 1e-300):
            m *= 2
            cur = nxt_a
            if m > _ANGULAR_CAP:
                raise QuadratureConvergenceError("angular refinement exceeded cap")
            continue
        nxt_r, scale = integral(2 * k, m)
        if abs(nxt_r - cur) > tol * max(abs(nxt_r), scale, 1e-300):
            k *= 2
            cur = nxt_r
            if k > _RADIAL_CAP:
                raise QuadratureConvergenceError("radial refinement exceeded cap")
            continue
        return complex(cur)
    raise QuadratureConvergenceError("bergman_pairing refinement did not settle")


def backward_shift(f):
    """(f - f(0))/z as an expression, singularity at 0 handled by jets."""
    return fe.BackwardShift(f)
