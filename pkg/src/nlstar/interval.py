"""Stationary NLS solutions on the half line and on a Dirichlet interval.

On the half line with phi(0) = 0 and spectral parameter mu = k^2 > 0 the
solutions form one-parameter families in the deformation parameter m::

    g = +1:  chi+(x) = k sqrt(2m/(1+m)) sn(k x / sqrt(1+m), m),        0 < m <= 1
    g = -1:  chi-(x) = k sqrt(2m(1-m)/(1-2m)) sd(k x / sqrt(1-2m), m),  0 < m < 1/2

with sd = sn/dn. An interval of length ``ell`` with Dirichlet ends carries
the n-nodal-domain solution when 2 ell = n * wavelength.

Inversions of k(m) and N(m) work in a coordinate adapted to the singular
end of the m-range (ln(1-m) for g=+1, 1/2-m for g=-1) so that the
returned :class:`Deformation` keeps 1-m and 1/2-m to full relative
precision.
"""
import math
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from . import elliptic as ell_
from .errors import DivergenceError, DomainError

SQRT2 = math.sqrt(2.0)
_RTOL = 4.0 * np.finfo(float).eps
_XTOL = 1e-300


class Deformation(NamedTuple):
    """Deformation parameter m together with its complements 1-m and 1/2-m."""

    m: float
    mc: float
    hg: float

    @classmethod
    def from_m(cls, m):
        return cls(float(m), 1.0 - m, 0.5 - m)

    @classmethod
    def from_mc(cls, mc):
        m = 1.0 - mc
        return cls(m, mc, 0.5 - m)

    @classmethod
    def from_hg(cls, hg):
        return cls(0.5 - hg, 0.5 + hg, hg)


def _as_param(m):
    return m if isinstance(m, Deformation) else Deformation.from_m(m)


def check_g(g):
    if g not in (1, -1):
        raise DomainError(f"interaction sign g must be +1 or -1, got {g!r}")


def check_m(g, m, allow_zero=True):
    """Raise :class:`DomainError` unless m lies in the g-admissible range.

    ``m`` may be a :class:`Deformation`, whose complements are then used
    for the upper-end test.
    """
    check_g(g)
    p = _as_param(m)
    lo_ok = p.m >= 0.0 if allow_zero else p.m > 0.0
    if g == 1:
        if not (lo_ok and p.mc >= 0.0):
            raise DomainError(f"g=+1 needs m in (0, 1], got m={p.m!r}")
    else:
        if not (lo_ok and p.hg > 0.0):
            raise DomainError(f"g=-1 needs m in (0, 1/2), got m={p.m!r}")


def _K(p):
    return ell_.ellipk_complement(p.mc)


def _stretch(g, p):
    # sqrt(1+m) for g=+1, sqrt(1-2m) for g=-1
    return math.sqrt(1.0 + p.m) if g == 1 else math.sqrt(2.0 * p.hg)


def chi(g, m, k, x):
    """Half-line profile chi(x); ``x`` may be a scalar or an array."""
    p = _as_param(m)
    check_m(g, p)
    if k <= 0.0:
        raise DomainError(f"k must be positive, got {k!r}")
    s = _stretch(g, p)
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0.0):
        raise DomainError("chi is defined for x >= 0")
    sn, cn, dn = ell_.jacobi_sncndn_array(np.atleast_1d(k * xs / s), p.m, p.mc)
    if g == 1:
        out = k * math.sqrt(2.0 * p.m / (1.0 + p.m)) * sn
    else:
        out = k * math.sqrt(2.0 * p.m * p.mc / (2.0 * p.hg)) * sn / dn
    return float(out[0]) if np.ndim(x) == 0 else out.reshape(xs.shape)


def chi_derivative(g, m, k, x):
    """Analytic x-derivative of :func:`chi`."""
    p = _as_param(m)
    check_m(g, p)
    if k <= 0.0:
        raise DomainError(f"k must be positive, got {k!r}")
    s = _stretch(g, p)
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0.0):
        raise DomainError("chi is defined for x >= 0")
    sn, cn, dn = ell_.jacobi_sncndn_array(np.atleast_1d(k * xs / s), p.m, p.mc)
    if g == 1:
        out = k * k * SQRT2 * math.sqrt(p.m) / (1.0 + p.m) * cn * dn
    else:
        out = k * k * SQRT2 * math.sqrt(p.m * p.mc) / (2.0 * p.hg) * cn / (dn * dn)
    return float(out[0]) if np.ndim(x) == 0 else out.reshape(xs.shape)


def theta(g, m):
    """Centre-slope factor: chi'(0) / (sqrt(2) k^2), independent of k."""
    p = _as_param(m)
    check_m(g, p)
    if g == 1:
        return math.sqrt(p.m) / (1.0 + p.m)
    return math.sqrt(p.m * p.mc) / (2.0 * p.hg)


def theta_deficit(p):
    """1/2 - theta+(m) evaluated from 1-m without cancellation (g=+1)."""
    q = p.mc
    return q * q / (2.0 * (2.0 - q) * (2.0 - q + 2.0 * math.sqrt(p.m)))


def wavelength(g, m, k):
    """Nonlinear wavelength: the period of chi in x."""
    p = _as_param(m)
    check_m(g, p)
    if p.mc == 0.0:
        return math.inf
    return 4.0 * _stretch(g, p) * _K(p) / k


def amplitude(g, m, k):
    """max_x |chi(x)|, attained at a quarter wavelength."""
    p = _as_param(m)
    check_m(g, p)
    if g == 1:
        return k * math.sqrt(2.0 * p.m / (1.0 + p.m))
    return k * math.sqrt(p.m / p.hg)


def _k_scaled(g, p):
    # k * ell / n as a function of the deformation
    return 2.0 * _stretch(g, p) * _K(p)


def k_of_m(g, n, ell, m):
    """Spectral curve k_{n,ell}(m) of the n-domain interval solution."""
    p = _as_param(m)
    check_m(g, p)
    _check_n_ell(n, ell)
    if p.mc == 0.0:
        raise DivergenceError("k(m) diverges at m = 1")
    return n * _k_scaled(g, p) / ell


def _check_n_ell(n, ell):
    if n <= 0:
        raise DomainError(f"number of nodal domains must be positive, got {n!r}")
    if not ell > 0.0:
        raise DomainError(f"length must be positive, got {ell!r}")


_KAPPA_HALF = 2.0 * math.sqrt(1.5) * ell_.ellint_K(0.5)  # g=+1 at m=1/2
_KAPPA_QUARTER = 2.0 * math.sqrt(0.5) * ell_.ellint_K(0.25)  # g=-1 at m=1/4


def deformation_of_k(g, n, ell, k):
    """Inverse of :func:`k_of_m` returning the full :class:`Deformation`."""
    check_g(g)
    _check_n_ell(n, ell)
    kappa = k * ell / n
    if g == 1:
        if not kappa > math.pi:
            raise DomainError(
                f"g=+1, n={n}, ell={ell}: k={k!r} outside admissible (n*pi/ell, inf) "
                f"= ({n * math.pi / ell!r}, inf)")
        if kappa <= _KAPPA_HALF:
            m = brentq(lambda m: _k_scaled(1, Deformation.from_m(m)) - kappa,
                       0.0, 0.5, xtol=_XTOL, rtol=_RTOL, maxiter=200)
            return Deformation.from_m(m)
        # kappa ~ 2 sqrt(2) (ln 4 - ln(mc)/2) for mc -> 0
        t_est = 2.0 * (ell_.LN4 - kappa / (2.0 * SQRT2))
        if t_est < -740.0:
            return Deformation(1.0, 0.0, -0.5)
        t_lo = max(t_est - 10.0, -744.0)
        f = lambda t: _k_scaled(1, Deformation.from_mc(math.exp(t))) - kappa
        t = brentq(f, t_lo, math.log(0.5), xtol=1e-15, rtol=_RTOL, maxiter=200)
        return Deformation.from_mc(math.exp(t))
    if not 0.0 < kappa < math.pi:
        raise DomainError(
            f"g=-1, n={n}, ell={ell}: k={k!r} outside admissible (0, n*pi/ell) "
            f"= (0, {n * math.pi / ell!r})")
    if kappa >= _KAPPA_QUARTER:
        m = brentq(lambda m: _k_scaled(-1, Deformation.from_m(m)) - kappa,
                   0.0, 0.25, xtol=_XTOL, rtol=_RTOL, maxiter=200)
        return Deformation.from_m(m)
    hg = brentq(lambda h: _k_scaled(-1, Deformation.from_hg(h)) - kappa,
                0.0, 0.25, xtol=_XTOL, rtol=_RTOL, maxiter=200)
    return Deformation.from_hg(hg)


def m_of_k(g, n, ell, k):
    """Deformation parameter m_{n,ell}(k), inverse of :func:`k_of_m`."""
    return deformation_of_k(g, n, ell, k).m


def _norm_scaled(g, p):
    # N * ell / n^2; Carlson forms of K (K - E) and (1-m) K (Pi(1|m,m) - K)
    if p.m == 0.0:
        return 0.0
    kk = _K(p)
    if g == 1:
        return 8.0 * kk * p.m / 3.0 * ell_.carlson_rd(0.0, p.mc, 1.0)
    return 8.0 * p.mc * kk * p.m / 3.0 * ell_.carlson_rd(0.0, 1.0, p.mc)


def norm_of_m(g, n, ell, m):
    """Squared L2 norm N_{n,ell}(m) of the n-domain interval solution."""
    p = _as_param(m)
    check_m(g, p)
    _check_n_ell(n, ell)
    if p.mc == 0.0:
        raise DivergenceError("N(m) diverges at m = 1")
    return n * n * _norm_scaled(g, p) / ell


def norm_max(n, ell):
    """Supremum of N over the attractive family: N as m -> 1/2."""
    _check_n_ell(n, ell)
    return n * n * _norm_scaled(-1, Deformation.from_hg(0.0)) / ell


_NU_HALF = _norm_scaled(1, Deformation.from_m(0.5))
_NU_QUARTER = _norm_scaled(-1, Deformation.from_m(0.25))


def deformation_of_norm(g, n, ell, N):
    """Inverse of :func:`norm_of_m` returning the full :class:`Deformation`."""
    check_g(g)
    _check_n_ell(n, ell)
    nu = N * ell / (n * n)
    if not N > 0.0:
        raise DomainError(f"norm must be positive, got N={N!r}")
    if g == 1:
        if nu <= _NU_HALF:
            m = brentq(lambda m: _norm_scaled(1, Deformation.from_m(m)) - nu,
                       0.0, 0.5, xtol=_XTOL, rtol=_RTOL, maxiter=200)
            return Deformation.from_m(m)
        # nu ~ 8 K (K - 1) for m -> 1 and K ~ ln 4 - ln(mc)/2
        kk = 0.5 + math.sqrt(0.25 + nu / 8.0)
        t_est = 2.0 * (ell_.LN4 - kk)
        if t_est < -740.0:
            raise DomainError(f"norm N={N!r} too large to resolve m below 1")
        t_lo = max(t_est - 10.0, -744.0)
        f = lambda t: _norm_scaled(1, Deformation.from_mc(math.exp(t))) - nu
        t = brentq(f, t_lo, math.log(0.5), xtol=1e-15, rtol=_RTOL, maxiter=200)
        return Deformation.from_mc(math.exp(t))
    nmax = norm_max(n, ell)
    if not N < nmax:
        err = DomainError(f"g=-1: N={N!r} must be below N_max={nmax!r}")
        err.n_max = nmax
        raise err
    if nu <= _NU_QUARTER:
        m = brentq(lambda m: _norm_scaled(-1, Deformation.from_m(m)) - nu,
                   0.0, 0.25, xtol=_XTOL, rtol=_RTOL, maxiter=200)
        return Deformation.from_m(m)
    hg = brentq(lambda h: _norm_scaled(-1, Deformation.from_hg(h)) - nu,
                0.0, 0.25, xtol=_XTOL, rtol=_RTOL, maxiter=200)
    return Deformation.from_hg(hg)


def m_of_norm(g, n, ell, N):
    """Deformation parameter m_{n,ell}(N), inverse of :func:`norm_of_m`."""
    return deformation_of_norm(g, n, ell, N).m


def k_of_norm(g, n, ell, N):
    """Spectral curve in the k-N plane: k_{n,ell}(N)."""
    return k_of_m(g, n, ell, deformation_of_norm(g, n, ell, N))


def flow_point(g, tau, ell, m):
    """Point (N, k) of the flow line through m at real flow time ``tau``.

    Same formulas as :func:`norm_of_m` / :func:`k_of_m` with the integer n
    replaced by tau, so k scales like tau and N like tau^2.
    """
    p = _as_param(m)
    check_m(g, p)
    if not tau > 0.0:
        raise DomainError(f"flow parameter must be positive, got {tau!r}")
    if not ell > 0.0:
        raise DomainError(f"length must be positive, got {ell!r}")
    return tau * tau * _norm_scaled(g, p) / ell, tau * _k_scaled(g, p) / ell


def node_positions(g, m, k, upto):
    """Zeros j * wavelength / 2 of chi in [0, upto]."""
    half = 0.5 * wavelength(g, m, k)
    if not math.isfinite(half):
        return np.array([0.0])
    j = np.arange(int(math.floor(upto / half * (1.0 + 1e-12))) + 1)
    return j * half


def interior_node_count(g, m, k, ell, rtol=1e-9):
    """Number of zeros of chi strictly inside (0, ell), from the wavelength."""
    half = 0.5 * wavelength(g, m, k)
    r = ell / half
    j = round(r)
    if abs(r - j) <= rtol * max(1.0, r):
        return max(j - 1, 0)
    return int(math.floor(r))


U_MAX = 300.0


def deformation_of_u(g, u):
    """Sign and deformation of the state coordinate u.

    The signed amplitude is a = b tanh(u) with b = 1 (g=+1) or 1/sqrt(2)
    (g=-1), so m = a^2 and the sign of u is the edge sign. The complement
    at the singular end comes straight from u: 1 - m = sech(u)^2 for g=+1
    and 1/2 - m = sech(u)^2 / 2 for g=-1. The profile is smooth through
    u = 0 and the singular end sits at |u| = infinity.
    """
    sigma = -1 if u < 0.0 else 1
    au = abs(u)
    th = math.tanh(au)
    sech2 = 1.0 / math.cosh(au) ** 2 if au < 350.0 else 0.0
    if g == 1:
        m = th * th
        return sigma, Deformation(m, sech2, 0.5 - m)
    m = 0.5 * th * th
    return sigma, Deformation(m, 1.0 - m, 0.5 * sech2)


def u_of_deformation(g, sigma, p):
    """Inverse of :func:`deformation_of_u`."""
    if g == 1:
        # tanh(u)^2 = m and sech(u)^2 = 1 - m
        if p.mc == 0.0:
            return sigma * math.inf
        return sigma * math.asinh(math.sqrt(p.m / p.mc))
    if p.hg <= 0.0:
        return sigma * math.inf
    return sigma * math.asinh(math.sqrt(p.m / p.hg))


def edge_terms(g, sigma, p, k, ell):
    """Value, slope and squared norm of sigma * chi on [0, ell].

    Returns ``(sigma chi(ell), sigma chi'(ell), int_0^ell chi^2)``; the
    complements in ``p`` are used directly, so m close to 1 or 1/2 keeps
    full precision. No range checks: this is the inner loop of the
    matching solver.
    """
    m, mc = p.m, p.mc
    if m == 0.0:
        return 0.0, 0.0, 0.0
    a = sigma * math.sqrt(m)
    if g == 1:
        s = math.sqrt(1.0 + m)
        y = k * ell / s
        sn, cn, dn = ell_._k.sncndn(y, m, mc)
        val = k * SQRT2 * a / s * sn
        slope = k * k * SQRT2 * a / (1.0 + m) * cn * dn
        if mc == 0.0:
            sq = 2.0 * k * m / s * (y - math.tanh(y))
        else:
            sq = 2.0 * k * m / s * ell_._k.sn2_integral(y, m, mc)
        return val, slope, sq
    hg = p.hg
    s = math.sqrt(2.0 * hg)
    y = k * ell / s
    sn, cn, dn = ell_._k.sncndn(y, m, mc)
    amp = k * math.sqrt(2.0 * mc) * a / s
    val = amp * sn / dn
    slope = k * k * math.sqrt(2.0 * mc) * a / (2.0 * hg) * cn / (dn * dn)
    sq = 2.0 * k * mc * m / s * ell_._k.sd2_integral(y, m, mc)
    return val, slope, sq
