"""Pure-Python elliptic kernels.

Reference implementation of the hot numerical core. The compiled module
``nlstar._kernels`` exposes the same functions with the same signatures;
``nlstar.elliptic`` picks one of the two at import time.

Carlson integrals use the duplication theorem with the Taylor tail of
Carlson (1995). Jacobi functions use the descending Landen (AGM) scheme on
a reduced argument in [0, K/2]; the rest of the period is reached through
the quarter-period identities so that cn and dn keep relative accuracy
near their zeros/minima.
"""
import math

import numpy as np

# Carlson's relative error target r; Q = (3r)^(-1/6) etc.
_ERRTOL_RF = (3.0 * 1e-16) ** (-1.0 / 6.0)
_ERRTOL_RD = (0.25 * 1e-16) ** (-1.0 / 6.0)
_MAXITER = 100


def carlson_rc(x, y):
    """R_C(x, y) = R_F(x, y, y) for x >= 0, y != 0 (Cauchy principal value for y < 0)."""
    if y < 0.0:
        # DLMF 19.2.20
        return math.sqrt(x / (x - y)) * carlson_rc(x - y, -y)
    if x == y:
        return 1.0 / math.sqrt(x)
    if x < y:
        t = math.sqrt((y - x) / y)
        if t < 1e-4:
            # arcsin(t)/t series, avoids 0/0
            t2 = t * t
            return (1.0 + t2 * (1.0 / 6.0 + t2 * 3.0 / 40.0)) / math.sqrt(y)
        return math.asin(t) / math.sqrt(y - x)
    t = math.sqrt((x - y) / x)
    if t < 1e-4:
        t2 = t * t
        return (1.0 - t2 * (1.0 / 6.0 - t2 * 3.0 / 40.0)) / math.sqrt(y)
    return math.atanh(t) / math.sqrt(x - y)


def carlson_rf(x, y, z):
    """Symmetric integral of the first kind R_F(x, y, z)."""
    if x < 0.0 or y < 0.0 or z < 0.0:
        raise ValueError("carlson_rf: arguments must be non-negative")
    if (x == 0.0) + (y == 0.0) + (z == 0.0) > 1:
        raise ZeroDivisionError("carlson_rf: at most one argument may vanish")
    x0, y0 = x, y
    a0 = (x + y + z) / 3.0
    q = _ERRTOL_RF * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    a = a0
    fac = 1.0
    for _ in range(_MAXITER):
        if fac * q <= abs(a):
            break
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        a = 0.25 * (a + lam)
        fac *= 0.25
    X = (a0 - x0) / a * fac
    Y = (a0 - y0) / a * fac
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0
            - 3.0 * e2 * e3 / 44.0) / math.sqrt(a)


def carlson_rd(x, y, z):
    """Degenerate integral of the second kind R_D(x, y, z) = R_J(x, y, z, z)."""
    if x < 0.0 or y < 0.0 or z <= 0.0:
        raise ValueError("carlson_rd: need x, y >= 0 and z > 0")
    if x == 0.0 and y == 0.0:
        raise ZeroDivisionError("carlson_rd: x and y cannot both vanish")
    x0, y0 = x, y
    a0 = (x + y + 3.0 * z) / 5.0
    q = _ERRTOL_RD * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    a = a0
    fac = 1.0
    acc = 0.0
    for _ in range(_MAXITER):
        if fac * q <= abs(a):
            break
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        acc += fac / (sz * (z + lam))
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        a = 0.25 * (a + lam)
        fac *= 0.25
    X = (a0 - x0) / a * fac
    Y = (a0 - y0) / a * fac
    Z = -(X + Y) / 3.0
    xy = X * Y
    z2 = Z * Z
    e2 = xy - 6.0 * z2
    e3 = (3.0 * xy - 8.0 * z2) * Z
    e4 = 3.0 * (xy - z2) * z2
    e5 = xy * z2 * Z
    series = (1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
              - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0)
    return fac * series / (a * math.sqrt(a)) + 3.0 * acc


def carlson_rj(x, y, z, p):
    """Symmetric integral of the third kind R_J(x, y, z, p) for p > 0."""
    if x < 0.0 or y < 0.0 or z < 0.0 or p <= 0.0:
        raise ValueError("carlson_rj: need x, y, z >= 0 and p > 0")
    if (x == 0.0) + (y == 0.0) + (z == 0.0) > 1:
        raise ZeroDivisionError("carlson_rj: at most one of x, y, z may vanish")
    x0, y0, z0 = x, y, z
    a0 = (x + y + z + 2.0 * p) / 5.0
    delta = (p - x) * (p - y) * (p - z)
    q = _ERRTOL_RD * max(abs(a0 - x), abs(a0 - y), abs(a0 - z), abs(a0 - p))
    a = a0
    fac = 1.0
    acc = 0.0
    for _ in range(_MAXITER):
        if fac * q <= abs(a):
            break
        sx, sy, sz, sp = math.sqrt(x), math.sqrt(y), math.sqrt(z), math.sqrt(p)
        lam = sx * (sy + sz) + sy * sz
        d = (sp + sx) * (sp + sy) * (sp + sz)
        e = delta * fac * fac * fac / (d * d)
        acc += fac / d * carlson_rc(1.0, 1.0 + e)
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        p = 0.25 * (p + lam)
        a = 0.25 * (a + lam)
        fac *= 0.25
    X = (a0 - x0) / a * fac
    Y = (a0 - y0) / a * fac
    Z = (a0 - z0) / a * fac
    P = -(X + Y + Z) / 2.0
    e2 = X * Y + X * Z + Y * Z - 3.0 * P * P
    e3 = X * Y * Z + 2.0 * e2 * P + 4.0 * P * P * P
    e4 = (2.0 * X * Y * Z + e2 * P + 3.0 * P * P * P) * P
    e5 = X * Y * Z * P * P
    series = (1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
              - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0)
    return fac * series / (a * math.sqrt(a)) + 6.0 * acc


def _sncndn_agm(u, m, mc):
    # 0 <= u <= K/2, 0 < m < 1
    a = 1.0
    b = math.sqrt(mc)
    c = math.sqrt(m)
    cs = [c]
    as_ = [a]
    n = 0
    while abs(c) > 1e-16 * a and n < 60:
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        as_.append(a)
        cs.append(c)
        n += 1
    phi = math.ldexp(a * u, n)
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + math.asin(cs[j] * math.sin(phi) / as_[j]))
    sn = math.sin(phi)
    cn = math.cos(phi)
    dn = math.sqrt(mc + m * cn * cn)
    return sn, cn, dn


def sncndn(u, m, mc, kk=-1.0):
    """Return (sn, cn, dn)(u | m) for 0 <= m <= 1 with mc = 1 - m given separately.

    ``kk`` may carry a precomputed K(m); a negative value means "compute it".
    """
    if m == 0.0:
        return math.sin(u), math.cos(u), 1.0
    if mc == 0.0:
        t = math.tanh(u)
        s = 1.0 / math.cosh(u)
        return t, s, s
    if kk < 0.0:
        kk = carlson_rf(0.0, mc, 1.0)
    sign = 1.0
    if u < 0.0:
        u = -u
        sign = -1.0
    r = math.fmod(u, 4.0 * kk)
    flip = 1.0
    if r > 2.0 * kk:
        r -= 2.0 * kk
        flip = -1.0
    cflip = flip
    if r > kk:
        r = 2.0 * kk - r
        cflip = -flip
    if r > 0.5 * kk:
        s0, c0, d0 = _sncndn_agm(kk - r, m, mc)
        smc = math.sqrt(mc)
        sn = c0 / d0
        cn = smc * s0 / d0
        dn = smc / d0
    else:
        sn, cn, dn = _sncndn_agm(r, m, mc)
    return sign * flip * sn, cflip * cn, dn


def sncndn_array(u, m, mc):
    """Vectorised :func:`sncndn` over a 1-D float array ``u``."""
    u = np.ascontiguousarray(u, dtype=float)
    sn = np.empty_like(u)
    cn = np.empty_like(u)
    dn = np.empty_like(u)
    kk = carlson_rf(0.0, mc, 1.0) if (m != 0.0 and mc != 0.0) else -1.0
    for i in range(u.shape[0]):
        sn[i], cn[i], dn[i] = sncndn(u[i], m, mc, kk)
    return sn, cn, dn


def _reduce_half_period(y, m, mc):
    # split y >= 0 into j full half-periods and a remainder in [0, 2K)
    kk = carlson_rf(0.0, mc, 1.0)
    j = math.floor(y / (2.0 * kk))
    r = y - 2.0 * kk * j
    if r < 0.0:
        r = 0.0
    return kk, j, r


def sn2_integral(y, m, mc):
    """Integral of sn(t|m)^2 over [0, y] for y >= 0 and 0 <= m < 1."""
    if m == 0.0:
        return 0.5 * y - 0.25 * math.sin(2.0 * y)
    kk, j, r = _reduce_half_period(y, m, mc)
    half = 2.0 / 3.0 * carlson_rd(0.0, mc, 1.0)
    flip = r > kk
    if flip:
        r = 2.0 * kk - r
    s, c, d = sncndn(r, m, mc, kk)
    if s == 0.0:
        part = 0.0
    else:
        part = s * s * s / 3.0 * carlson_rd(c * c, d * d, 1.0)
    if flip:
        part = half - part
    return j * half + part


def sd2_integral(y, m, mc):
    """Integral of (sn/dn)(t|m)^2 over [0, y] for y >= 0 and 0 <= m < 1."""
    if m == 0.0:
        return 0.5 * y - 0.25 * math.sin(2.0 * y)
    kk, j, r = _reduce_half_period(y, m, mc)
    half = 2.0 / 3.0 * carlson_rd(0.0, 1.0, mc)
    flip = r > kk
    if flip:
        r = 2.0 * kk - r
    s, c, d = sncndn(r, m, mc, kk)
    if s == 0.0:
        part = 0.0
    else:
        part = s * s * s / 3.0 * carlson_rd(c * c, 1.0, d * d)
    if flip:
        part = half - part
    return j * half + part
