"""Elliptic integrals and Jacobi elliptic functions.

Conventions (parameter ``m``, algebraic upper limit ``x``)::

    F(x|m)    = int_0^x du / (sqrt(1-u^2) sqrt(1-m u^2))
    K(m)      = F(1|m)
    E(x|m)    = int_0^x sqrt(1-m u^2) / sqrt(1-u^2) du
    Pi(x|a,m) = int_0^x du / (sqrt(1-u^2) sqrt(1-m u^2) (1-a u^2))

``sn(., m)`` is the inverse of ``F(.|m)`` on [0, K(m)], extended to the real
line by symmetry and period 4K(m). In NIST/DLMF notation x = sin(phi) and
m = k^2 (the modulus k is *not* the parameter used here).

The integrals are evaluated through Carlson's symmetric forms, the Jacobi
functions by the descending Landen transformation. Both live in a small
kernel module that is compiled with Cython when available; set
``NLSTAR_PURE_PYTHON=1`` to force the pure-Python kernels.
"""
import math
import os

import numpy as np

from .errors import DivergenceError, DomainError

if os.environ.get("NLSTAR_PURE_PYTHON"):
    from . import _kernels_py as _k
    BACKEND = "python"
else:
    try:
        from . import _kernels as _k
        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        from . import _kernels_py as _k
        BACKEND = "python"

carlson_rf = _k.carlson_rf
carlson_rd = _k.carlson_rd
carlson_rj = _k.carlson_rj
carlson_rc = _k.carlson_rc

LN4 = 2.0 * math.log(2.0)

# below this complementary parameter K switches to its log asymptotic
_K_ASYMPTOTIC_MC = 1e-10


def _check_x(x):
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"upper limit x={x!r} outside [0, 1]")


def _check_m(m):
    if not m <= 1.0:
        raise DomainError(f"parameter m={m!r} > 1")


def ellipk_complement(mc):
    """K as a function of the complementary parameter ``mc = 1 - m``.

    Use this when ``m`` is so close to 1 that ``1 - m`` is not representable
    from ``m`` itself.
    """
    if mc < 0.0:
        raise DomainError(f"complementary parameter mc={mc!r} < 0")
    if mc == 0.0:
        raise DivergenceError("K(m) diverges at m = 1")
    if mc < _K_ASYMPTOTIC_MC:
        # K(1-d) = L + (L-1) d/4 + O(d^2 L),  L = ln(4/sqrt(d))
        L = LN4 - 0.5 * math.log(mc)
        return L + (L - 1.0) * 0.25 * mc
    return carlson_rf(0.0, mc, 1.0)


def ellint_K(m):
    """Complete elliptic integral of the first kind K(m), m < 1."""
    _check_m(m)
    if m == 1.0:
        raise DivergenceError("K(m) diverges at m = 1")
    return ellipk_complement(1.0 - m)


def ellint_F(x, m):
    """Incomplete elliptic integral of the first kind F(x|m)."""
    _check_x(x)
    _check_m(m)
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return ellint_K(m)
    c2 = (1.0 - x) * (1.0 + x)
    d2 = 1.0 - m * x * x
    return x * carlson_rf(c2, d2, 1.0)


def ellint_E(x, m):
    """Incomplete elliptic integral of the second kind E(x|m)."""
    _check_x(x)
    _check_m(m)
    if x == 0.0:
        return 0.0
    if m == 1.0:
        return x
    c2 = (1.0 - x) * (1.0 + x)
    d2 = 1.0 - m * x * x
    return x * carlson_rf(c2, d2, 1.0) - m * x ** 3 / 3.0 * carlson_rd(c2, d2, 1.0)


def ellint_Pi(x, a, m):
    """Incomplete elliptic integral of the third kind Pi(x|a,m), a <= 1."""
    _check_x(x)
    _check_m(m)
    if not a <= 1.0:
        raise DomainError(f"characteristic a={a!r} > 1")
    if x == 0.0:
        return 0.0
    if x == 1.0 and (a == 1.0 or m == 1.0):
        raise DivergenceError("Pi(1|a,m) diverges for a = 1 or m = 1")
    c2 = (1.0 - x) * (1.0 + x)
    d2 = 1.0 - m * x * x
    out = x * carlson_rf(c2, d2, 1.0)
    if a != 0.0:
        out += a * x ** 3 / 3.0 * carlson_rj(c2, d2, 1.0, 1.0 - a * x * x)
    return out


def _check_jacobi_m(m):
    if not (0.0 <= m <= 1.0):
        raise DomainError(f"Jacobi functions need 0 <= m <= 1, got m={m!r}")


def jacobi_sncndn(x, m, mc=None):
    """Return ``(sn, cn, dn)`` at ``(x, m)``.

    ``mc`` optionally supplies 1 - m to full precision when m is near 1.
    """
    _check_jacobi_m(m)
    if mc is None:
        mc = 1.0 - m
    return _k.sncndn(float(x), float(m), float(mc))


def jacobi_sncndn_array(x, m, mc=None):
    """Vectorised :func:`jacobi_sncndn` for a 1-D array of arguments."""
    _check_jacobi_m(m)
    if mc is None:
        mc = 1.0 - m
    x = np.asarray(x, dtype=float)
    sn, cn, dn = _k.sncndn_array(x.ravel(), float(m), float(mc))
    return sn.reshape(x.shape), cn.reshape(x.shape), dn.reshape(x.shape)


def jacobi_sn(x, m):
    return jacobi_sncndn(x, m)[0]


def jacobi_cn(x, m):
    return jacobi_sncndn(x, m)[1]


def jacobi_dn(x, m):
    return jacobi_sncndn(x, m)[2]


def jacobi_derivatives(x, m):
    """x-derivatives ``(d sn, d cn, d dn)`` = (cn dn, -sn dn, -m sn cn)."""
    sn, cn, dn = jacobi_sncndn(x, m)
    return cn * dn, -sn * dn, -m * sn * cn


def sn_by_inversion(x, m, tol=1e-14):
    """sn(x, m) computed directly from its definition as the inverse of F.

    Independent of the Landen route used by :func:`jacobi_sn`; Newton on
    F(u|m) - x with a bisection safeguard on [0, 1].
    """
    _check_jacobi_m(m)
    if m == 1.0:
        return math.tanh(x)
    kk = ellint_K(m)
    sign = -1.0 if x < 0.0 else 1.0
    r = math.fmod(abs(x), 4.0 * kk)
    if r > 2.0 * kk:
        r -= 2.0 * kk
        sign = -sign
    if r > kk:
        r = 2.0 * kk - r
    lo, hi = 0.0, 1.0
    u = math.sin(r) if m < 0.5 else math.tanh(r)
    u = min(max(u, 0.0), 1.0)
    for _ in range(200):
        f = ellint_F(u, m) - r
        if f > 0.0:
            hi = u
        else:
            lo = u
        dfdu = math.sqrt((1.0 - u) * (1.0 + u) * (1.0 - m * u * u))
        step = f * dfdu
        u_new = u - step
        if not (lo < u_new < hi) or dfdu == 0.0:
            u_new = 0.5 * (lo + hi)
        if abs(u_new - u) <= tol or hi - lo <= tol:
            u = u_new
            break
        u = u_new
    return sign * u


def sn2_integral(y, m, mc=None):
    """int_0^y sn(t|m)^2 dt for y >= 0, 0 <= m < 1 (cancellation-free)."""
    _check_jacobi_m(m)
    if mc is None:
        mc = 1.0 - m
    if y < 0.0:
        return -_k.sn2_integral(-y, m, mc)
    return _k.sn2_integral(y, m, mc)


def sd2_integral(y, m, mc=None):
    """int_0^y (sn/dn)(t|m)^2 dt for y >= 0, 0 <= m < 1 (cancellation-free)."""
    _check_jacobi_m(m)
    if mc is None:
        mc = 1.0 - m
    if y < 0.0:
        return -_k.sd2_integral(-y, m, mc)
    return _k.sd2_integral(y, m, mc)
