"""Composable analytic-function expressions with jet evaluation.

Expressions are immutable trees built from polynomials, rational functions,
Blaschke factors, Cauchy kernels and the usual combinators.  Values and
derivatives are computed by truncated-Taylor (jet) arithmetic propagated
through the tree; a jet is stored internally as an (L+1, M) array of local
Taylor coefficients f^(k)(z)/k! over M evaluation points.  Derivatives are
never obtained by finite differences.
"""

import math

import numpy as np

from . import _kernels as K
from .errors import PoleInsideDiskError, PoleOnDomainError, QuadratureConvergenceError, ValidationError

_TAYLOR_CAP = 2**22
_TAYLOR_TOL = 1e-10

# ---------------------------------------------------------------------------
# expression nodes


class FunctionExpr:
    """Base class; nodes are immutable after construction."""

    __slots__ = ()

    def __call__(self, z):
        return evaluate(self, z)


class Polynomial(FunctionExpr):
    """Sum of c_k z^k with ascending coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128))
        if c.size == 0:
            c = np.zeros(1, dtype=np.complex128)
        if not np.all(np.isfinite(c.view(np.float64))):
            raise ValidationError("polynomial coefficients must be finite")
        nz = np.nonzero(c)[0]
        c = c[: nz[-1] + 1] if nz.size else c[:1]
        c.flags.writeable = False
        self.coeffs = c

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)})"


class Rational(FunctionExpr):
    """num(z)/den(z) with den zero-free on the closed unit disk."""

    __slots__ = ("num", "den", "den_roots")

    def __init__(self, num, den):
        self.num = num if isinstance(num, Polynomial) else Polynomial(num)
        self.den = den if isinstance(den, Polynomial) else Polynomial(den)
        dc = self.den.coeffs
        if dc.size == 1:
            if dc[0] == 0:
                raise ValidationError("denominator is identically zero")
            roots = np.zeros(0, dtype=np.complex128)
        else:
            roots = np.roots(dc[::-1])
            if roots.size and np.min(np.abs(roots)) <= 1.0:
                raise PoleInsideDiskError(
                    "denominator has a zero on the closed unit disk"
                )
        roots.flags.writeable = False
        self.den_roots = roots

    def __repr__(self):
        return f"Rational({list(self.num.coeffs)}, {list(self.den.coeffs)})"


class BlaschkeFactor(FunctionExpr):
    """(lam - z)/(1 - conj(lam) z) for |lam| < 1."""

    __slots__ = ("lam",)

    def __init__(self, lam):
        lam = complex(lam)
        if not (abs(lam) < 1.0 and math.isfinite(abs(lam))):
            raise ValidationError(f"Blaschke factor needs |lam| < 1, got {lam!r}")
        self.lam = lam

    def __repr__(self):
        return f"BlaschkeFactor({self.lam})"


class CauchyKernel(FunctionExpr):
    """1/(1 - conj(zeta) z) for zeta in the closed disk."""

    __slots__ = ("zeta",)

    def __init__(self, zeta):
        zeta = complex(zeta)
        if not (abs(zeta) <= 1.0 + 1e-12 and math.isfinite(abs(zeta))):
            raise ValidationError(f"Cauchy kernel needs |zeta| <= 1, got {zeta!r}")
        self.zeta = zeta

    def __repr__(self):
        return f"CauchyKernel({self.zeta})"


class Sum(FunctionExpr):
    __slots__ = ("terms",)

    def __init__(self, terms):
        terms = tuple(terms)
        if not terms:
            raise ValidationError("Sum needs at least one term")
        self.terms = terms


class Product(FunctionExpr):
    __slots__ = ("factors", "_blaschke_lams")

    def __init__(self, factors):
        factors = tuple(factors)
        if not factors:
            raise ValidationError("Product needs at least one factor")
        self.factors = factors
        # fused kernel path for pure Blaschke products
        if all(isinstance(f, BlaschkeFactor) for f in factors):
            lams = np.array([f.lam for f in factors], dtype=np.complex128)
            lams.flags.writeable = False
            self._blaschke_lams = lams
        else:
            self._blaschke_lams = None


class IntegerPower(FunctionExpr):
    __slots__ = ("base", "power")

    def __init__(self, base, power):
        power = int(power)
        if power < 0:
            raise ValidationError("IntegerPower needs power >= 0")
        self.base = base
        self.power = power


class Compose(FunctionExpr):
    """outer(inner(z))."""

    __slots__ = ("outer", "inner")

    def __init__(self, outer, inner):
        self.outer = outer
        self.inner = inner


class ScalarMultiple(FunctionExpr):
    __slots__ = ("scalar", "expr")

    def __init__(self, scalar, expr):
        self.scalar = complex(scalar)
        if not math.isfinite(abs(self.scalar)):
            raise ValidationError("scalar must be finite")
        self.expr = expr


class Derivative(FunctionExpr):
    """order-th complex derivative of the inner expression."""

    __slots__ = ("expr", "order")

    def __init__(self, expr, order):
        order = int(order)
        if order < 0:
            raise ValidationError("derivative order must be >= 0")
        self.expr = expr
        self.order = order


class BackwardShift(FunctionExpr):
    """(f - f(0))/z with the removable singularity at 0 handled by jets.

    Inside |z| < 0.1 the node evaluates the shifted Taylor series of f at 0
    (cancellation-free); outside it divides jets directly.
    """

    __slots__ = ("expr", "f0", "series")

    _RADIUS = 0.1
    _TERMS = 48

    def __init__(self, expr):
        self.expr = expr
        a = jet_coeffs(expr, np.zeros(1, dtype=np.complex128), self._TERMS)[:, 0]
        self.f0 = complex(a[0])
        series = np.ascontiguousarray(a[1:])
        series.flags.writeable = False
        self.series = series


class BoundaryKernel(FunctionExpr):
    """(1 - conj(b(zeta)) b(z)) / (1 - conj(zeta) z) for an inner product b.

    For |zeta| = 1 the singularity at z = zeta is removable; points within
    1e-6 of zeta are evaluated through the local Taylor series of b at zeta.
    """

    __slots__ = ("inner", "zeta", "inner_zeta", "on_boundary", "_series")

    _NEAR = 1e-6
    _EXTRA = 8

    def __init__(self, inner, zeta):
        zeta = complex(zeta)
        az = abs(zeta)
        if az > 1.0 + 1e-9:
            raise ValidationError("kernel point must lie in the closed disk")
        self.on_boundary = az >= 1.0 - 1e-12
        if self.on_boundary and az != 1.0:
            zeta = zeta / az
        self.inner = inner
        self.zeta = zeta
        self.inner_zeta = complex(
            evaluate(inner, np.array([zeta], dtype=np.complex128))[0]
        )
        self._series = {}

    def local_series(self, order):
        """Taylor coefficients of the kernel at zeta, boundary case only."""
        cached = self._series.get(order)
        if cached is not None:
            return cached
        b = jet_coeffs(
            self.inner, np.array([self.zeta], dtype=np.complex128), order + 1
        )[:, 0]
        s = self.zeta * np.conj(self.inner_zeta) * b[1:]
        s.flags.writeable = False
        self._series[order] = s
        return s


# ---------------------------------------------------------------------------
# public Jet container


class Jet:
    """Derivatives [f(z), f'(z), ..., f^(L)(z)] at a single point."""

    __slots__ = ("order", "values")

    def __init__(self, order, values):
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != (order + 1,):
            raise ValidationError("jet length must equal order + 1")
        self.order = order
        self.values = values

    def __len__(self):
        return self.order + 1

    def __getitem__(self, k):
        return self.values[k]

    def __iter__(self):
        return iter(self.values)

    def __repr__(self):
        return f"Jet(order={self.order}, values={list(self.values)})"


# ---------------------------------------------------------------------------
# evaluation dispatchers (array-valued)


def _check_points(z):
    z = np.ascontiguousarray(z, dtype=np.complex128)
    if not np.all(np.isfinite(z.view(np.float64))):
        raise ValidationError("evaluation points must be finite")
    return z


def _rational_pole_guard(expr, z, den_values):
    bad = np.abs(den_values) < 1e-12
    if not np.any(bad):
        return
    for root in expr.den_roots:
        if np.any(np.abs(z[bad] - root) < 1e-14):
            raise PoleOnDomainError(f"evaluation within 1e-14 of pole {root}")


def values(expr, z):
    """Vectorised evaluation over a 1-d array of points."""
    if isinstance(expr, Polynomial):
        return K.poly_eval(expr.coeffs, z)
    if isinstance(expr, Rational):
        den = K.poly_eval(expr.den.coeffs, z)
        _rational_pole_guard(expr, z, den)
        return K.poly_eval(expr.num.coeffs, z) / den
    if isinstance(expr, BlaschkeFactor):
        lam = expr.lam
        return (lam - z) / (1.0 - np.conj(lam) * z)
    if isinstance(expr, CauchyKernel):
        u = 1.0 - np.conj(expr.zeta) * z
        bad = np.abs(u) < 1e-12
        if np.any(bad) and np.any(np.abs(z[bad] - expr.zeta) < 1e-14):
            raise PoleOnDomainError("Cauchy kernel evaluated at its boundary pole")
        return 1.0 / u
    if isinstance(expr, Sum):
        acc = values(expr.terms[0], z).copy()
        for t in expr.terms[1:]:
            acc += values(t, z)
        return acc
    if isinstance(expr, Product):
        if expr._blaschke_lams is not None:
            return K.blaschke_prod_eval(expr._blaschke_lams, z)
        acc = values(expr.factors[0], z).copy()
        for f in expr.factors[1:]:
            acc *= values(f, z)
        return acc
    if isinstance(expr, IntegerPower):
        if expr.power == 0:
            return np.ones_like(z)
        return values(expr.base, z) ** expr.power
    if isinstance(expr, Compose):
        return values(expr.outer, np.ascontiguousarray(values(expr.inner, z)))
    if isinstance(expr, ScalarMultiple):
        return expr.scalar * values(expr.expr, z)
    if isinstance(expr, Derivative):
        if expr.order == 0:
            return values(expr.expr, z)
        jets = jet_coeffs(expr.expr, z, expr.order)
        return jets[expr.order] * math.factorial(expr.order)
    if isinstance(expr, BackwardShift):
        near = np.abs(z) < BackwardShift._RADIUS
        out = np.empty_like(z)
        if np.any(near):
            out[near] = K.poly_eval(expr.series, np.ascontiguousarray(z[near]))
        far = ~near
        if np.any(far):
            zf = np.ascontiguousarray(z[far])
            out[far] = (values(expr.expr, zf) - expr.f0) / zf
        return out
    if isinstance(expr, BoundaryKernel):
        near = (
            np.abs(z - expr.zeta) < BoundaryKernel._NEAR
            if expr.on_boundary
            else np.zeros(z.shape, dtype=bool)
        )
        zsafe = np.where(near, 0.0, z)
        u = 1.0 - np.conj(expr.zeta) * zsafe
        bz = values(expr.inner, np.ascontiguousarray(zsafe))
        out = (1.0 - np.conj(expr.inner_zeta) * bz) / u
        if np.any(near):
            s = expr.local_series(BoundaryKernel._EXTRA)
            out[near] = K.poly_eval(s, np.ascontiguousarray(z[near] - expr.zeta))
        return out
    raise TypeError(f"unknown expression node {type(expr).__name__}")


def _const_jet(value_row, L):
    out = np.zeros((L + 1,) + value_row.shape, dtype=np.complex128)
    out[0] = value_row
    return out


def _compose_series(fjet, gjet):
    """Jet of f∘g given f's jet at g(z) and g's jet at z (same truncation)."""
    L = fjet.shape[0] - 1
    h = gjet.copy()
    h[0] = 0.0
    r = np.zeros_like(fjet)
    r[0] = fjet[L]
    for j in range(L - 1, -1, -1):
        r = K.jet_mul(r, h)
        r[0] += fjet[j]
    return r


def jet_coeffs(expr, z, L):
    """(L+1, M) local Taylor coefficients of expr at each point of z."""
    if isinstance(expr, Polynomial):
        return K.poly_jet(expr.coeffs, z, L)
    if isinstance(expr, Rational):
        den = K.poly_jet(expr.den.coeffs, z, L)
        _rational_pole_guard(expr, z, den[0])
        return K.jet_div(K.poly_jet(expr.num.coeffs, z, L), den)
    if isinstance(expr, BlaschkeFactor):
        return K.blaschke_jet(expr.lam, z, L)
    if isinstance(expr, CauchyKernel):
        u = 1.0 - np.conj(expr.zeta) * z
        bad = np.abs(u) < 1e-12
        if np.any(bad) and np.any(np.abs(z[bad] - expr.zeta) < 1e-14):
            raise PoleOnDomainError("Cauchy kernel evaluated at its boundary pole")
        return K.cauchy_jet(np.conj(expr.zeta), z, L)
    if isinstance(expr, Sum):
        acc = jet_coeffs(expr.terms[0], z, L).copy()
        for t in expr.terms[1:]:
            acc += jet_coeffs(t, z, L)
        return acc
    if isinstance(expr, Product):
        if expr._blaschke_lams is not None:
            return K.blaschke_prod_jet(expr._blaschke_lams, z, L)
        acc = jet_coeffs(expr.factors[0], z, L)
        for f in expr.factors[1:]:
            acc = K.jet_mul(acc, jet_coeffs(f, z, L))
        return acc
    if isinstance(expr, IntegerPower):
        if expr.power == 0:
            return _const_jet(np.ones_like(z), L)
        base = jet_coeffs(expr.base, z, L)
        acc = None
        p = expr.power
        while p:
            if p & 1:
                acc = base if acc is None else K.jet_mul(acc, base)
            p >>= 1
            if p:
                base = K.jet_mul(base, base)
        return acc
    if isinstance(expr, Compose):
        g = jet_coeffs(expr.inner, z, L)
        f = jet_coeffs(expr.outer, np.ascontiguousarray(g[0]), L)
        return _compose_series(f, g)
    if isinstance(expr, ScalarMultiple):
        return expr.scalar * jet_coeffs(expr.expr, z, L)
    if isinstance(expr, Derivative):
        m = expr.order
        if m == 0:
            return jet_coeffs(expr.expr, z, L)
        a = jet_coeffs(expr.expr, z, L + m)
        out = np.empty((L + 1,) + z.shape, dtype=np.complex128)
        factor = float(math.factorial(m))
        for k in range(L + 1):
            out[k] = a[m + k] * factor
            factor *= (m + k + 1) / (k + 1)
        return out
    if isinstance(expr, BackwardShift):
        near = np.abs(z) < BackwardShift._RADIUS
        out = np.empty((L + 1,) + z.shape, dtype=np.complex128)
        if np.any(near):
            zn = np.ascontiguousarray(z[near])
            out[:, near] = K.poly_jet(expr.series, zn, L)
        far = ~near
        if np.any(far):
            zf = np.ascontiguousarray(z[far])
            num = jet_coeffs(expr.expr, zf, L)
            num[0] -= expr.f0
            den = np.zeros_like(num)
            den[0] = zf
            if L >= 1:
                den[1] = 1.0
            out[:, far] = K.jet_div(num, den)
        return out
    if isinstance(expr, BoundaryKernel):
        near = (
            np.abs(z - expr.zeta) < BoundaryKernel._NEAR
            if expr.on_boundary
            else np.zeros(z.shape, dtype=bool)
        )
        zsafe = np.ascontiguousarray(np.where(near, 0.0, z))
        bj = jet_coeffs(expr.inner, zsafe, L)
        top = -np.conj(expr.inner_zeta) * bj
        top[0] += 1.0
        out = K.jet_mul(top, K.cauchy_jet(np.conj(expr.zeta), zsafe, L))
        if np.any(near):
            s = expr.local_series(L + BoundaryKernel._EXTRA)
            zn = np.ascontiguousarray(z[near] - expr.zeta)
            out[:, near] = K.poly_jet(s, zn, L)
        return out
    raise TypeError(f"unknown expression node {type(expr).__name__}")


# ---------------------------------------------------------------------------
# public operations


def evaluate(expr, z):
    """Evaluate an expression at a point or an array of points."""
    if np.isscalar(z) or isinstance(z, (complex, float, int)):
        pts = _check_points(np.array([z], dtype=np.complex128))
        return complex(values(expr, pts)[0])
    pts = _check_points(np.asarray(z, dtype=np.complex128).ravel())
    out = values(expr, pts)
    return out.reshape(np.shape(z))


def eval_jet(expr, z, L):
    """Value and derivatives up to order L at a single point."""
    L = int(L)
    if L < 0:
        raise ValidationError("jet order must be >= 0")
    pts = _check_points(np.array([complex(z)], dtype=np.complex128))
    coeffs = jet_coeffs(expr, pts, L)[:, 0]
    fact = np.cumprod(np.r_[1.0, np.arange(1, L + 1, dtype=np.float64)])
    return Jet(L, coeffs * fact)


def _pow2_at_least(x):
    return 1 << max(0, int(x - 1)).bit_length()


def taylor_coefficients(expr, D, M=None):
    """First D+1 Maclaurin coefficients via FFT of boundary samples.

    Doubles the sample count until all requested coefficients are stable to
    1e-10 relative to their common scale; exact (to rounding) when expr is a
    polynomial of degree < M.
    """
    D = int(D)
    if D < 0:
        raise ValidationError("need D >= 0")
    if M is None:
        deg = degree_bound(expr)
        target = 32 * deg if deg is not None else max(
            32 * (D + 1), int(8 * bandwidth_hint(expr))
        )
        M = _pow2_at_least(max(4096, min(target, _TAYLOR_CAP)))
    else:
        M = int(M)
        if M & (M - 1) or M <= D:
            raise ValidationError("M must be a power of two exceeding D")

    prev = None
    while M <= _TAYLOR_CAP:
        nodes = np.exp(2j * np.pi * np.arange(M) / M)
        c = np.fft.fft(values(expr, nodes))[: D + 1] / M
        if prev is not None:
            scale = max(float(np.max(np.abs(c))), 1e-300)
            if float(np.max(np.abs(c - prev))) <= _TAYLOR_TOL * scale:
                return c
        prev = c
        M *= 2
    raise QuadratureConvergenceError(
        f"Taylor coefficients did not stabilise below M = {_TAYLOR_CAP}"
    )


# ---------------------------------------------------------------------------
# structural hints used by the quadrature engines


def degree_bound(expr):
    """Polynomial degree when the expression is a polynomial, else None."""
    if isinstance(expr, Polynomial):
        return len(expr.coeffs) - 1
    if isinstance(expr, ScalarMultiple):
        return degree_bound(expr.expr)
    if isinstance(expr, Sum):
        degs = [degree_bound(t) for t in expr.terms]
        return None if any(d is None for d in degs) else max(degs)
    if isinstance(expr, Product):
        degs = [degree_bound(f) for f in expr.factors]
        return None if any(d is None for d in degs) else sum(degs)
    if isinstance(expr, IntegerPower):
        d = degree_bound(expr.base)
        return None if d is None else d * expr.power
    if isinstance(expr, Compose):
        do, di = degree_bound(expr.outer), degree_bound(expr.inner)
        return None if do is None or di is None else do * di
    if isinstance(expr, Derivative):
        d = degree_bound(expr.expr)
        return None if d is None else max(d - expr.order, 0)
    if isinstance(expr, BackwardShift):
        d = degree_bound(expr.expr)
        return None if d is None else max(d - 1, 0)
    return None


def bandwidth_hint(expr):
    """Rough count of boundary oscillations, used to size starting grids."""
    if isinstance(expr, Polynomial):
        return float(max(len(expr.coeffs) - 1, 1))
    if isinstance(expr, Rational):
        margin = (
            float(np.min(np.abs(expr.den_roots))) - 1.0 if expr.den_roots.size else 1.0
        )
        margin = max(margin, 1e-7)
        return bandwidth_hint(expr.num) + len(expr.den.coeffs) * (1.0 + 1.0 / margin)
    if isinstance(expr, BlaschkeFactor):
        a = abs(expr.lam)
        return (1.0 + a) / (1.0 - a)
    if isinstance(expr, CauchyKernel):
        return min(2.0 / max(1.0 - abs(expr.zeta), 1e-7), 1e7)
    if isinstance(expr, Sum):
        return max(bandwidth_hint(t) for t in expr.terms)
    if isinstance(expr, Product):
        return sum(bandwidth_hint(f) for f in expr.factors)
    if isinstance(expr, IntegerPower):
        return max(expr.power, 1) * bandwidth_hint(expr.base)
    if isinstance(expr, Compose):
        inner = expr.inner
        if isinstance(inner, BlaschkeFactor):
            distortion = bandwidth_hint(inner)
        else:
            distortion = max(bandwidth_hint(inner), 1.0)
        return bandwidth_hint(expr.outer) * distortion
    if isinstance(expr, ScalarMultiple):
        return bandwidth_hint(expr.expr)
    if isinstance(expr, Derivative):
        return bandwidth_hint(expr.expr) + 2.0 * expr.order
    if isinstance(expr, BackwardShift):
        return bandwidth_hint(expr.expr) + 1.0
    if isinstance(expr, BoundaryKernel):
        return 2.0 * bandwidth_hint(expr.inner) + 8.0
    return 64.0


def constant(c):
    """Constant expression."""
    return Polynomial([c])
