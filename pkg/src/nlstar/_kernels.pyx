# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled elliptic kernels.

Same functions and signatures as ``nlstar._kernels_py``; see that module
for the algorithms. Keep the two in sync.
"""
from libc.math cimport sqrt, sin, cos, asin, atanh, tanh, cosh, fmod, floor, ldexp, fabs

import numpy as np

cdef double _ERRTOL_RF = (3.0 * 1e-16) ** (-1.0 / 6.0)
cdef double _ERRTOL_RD = (0.25 * 1e-16) ** (-1.0 / 6.0)
cdef int _MAXITER = 100


cdef double _rc(double x, double y) nogil:
    cdef double t, t2
    if y < 0.0:
        return sqrt(x / (x - y)) * _rc(x - y, -y)
    if x == y:
        return 1.0 / sqrt(x)
    if x < y:
        t = sqrt((y - x) / y)
        if t < 1e-4:
            t2 = t * t
            return (1.0 + t2 * (1.0 / 6.0 + t2 * 3.0 / 40.0)) / sqrt(y)
        return asin(t) / sqrt(y - x)
    t = sqrt((x - y) / x)
    if t < 1e-4:
        t2 = t * t
        return (1.0 - t2 * (1.0 / 6.0 - t2 * 3.0 / 40.0)) / sqrt(y)
    return atanh(t) / sqrt(x - y)


cdef double _rf(double x, double y, double z) nogil:
    cdef double x0 = x, y0 = y
    cdef double a0 = (x + y + z) / 3.0
    cdef double q = _ERRTOL_RF * max(fabs(a0 - x), max(fabs(a0 - y), fabs(a0 - z)))
    cdef double a = a0, fac = 1.0, sx, sy, sz, lam
    cdef double X, Y, Z, e2, e3
    cdef int i
    for i in range(_MAXITER):
        if fac * q <= fabs(a):
            break
        sx = sqrt(x)
        sy = sqrt(y)
        sz = sqrt(z)
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
            - 3.0 * e2 * e3 / 44.0) / sqrt(a)


cdef double _rd(double x, double y, double z) nogil:
    cdef double x0 = x, y0 = y
    cdef double a0 = (x + y + 3.0 * z) / 5.0
    cdef double q = _ERRTOL_RD * max(fabs(a0 - x), max(fabs(a0 - y), fabs(a0 - z)))
    cdef double a = a0, fac = 1.0, acc = 0.0, sx, sy, sz, lam
    cdef double X, Y, Z, xy, z2, e2, e3, e4, e5, series
    cdef int i
    for i in range(_MAXITER):
        if fac * q <= fabs(a):
            break
        sx = sqrt(x)
        sy = sqrt(y)
        sz = sqrt(z)
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
    return fac * series / (a * sqrt(a)) + 3.0 * acc


cdef double _rj(double x, double y, double z, double p) nogil:
    cdef double x0 = x, y0 = y, z0 = z
    cdef double a0 = (x + y + z + 2.0 * p) / 5.0
    cdef double delta = (p - x) * (p - y) * (p - z)
    cdef double q = _ERRTOL_RD * max(max(fabs(a0 - x), fabs(a0 - y)),
                                     max(fabs(a0 - z), fabs(a0 - p)))
    cdef double a = a0, fac = 1.0, acc = 0.0, sx, sy, sz, sp, lam, d, e
    cdef double X, Y, Z, P, e2, e3, e4, e5, series
    cdef int i
    for i in range(_MAXITER):
        if fac * q <= fabs(a):
            break
        sx = sqrt(x)
        sy = sqrt(y)
        sz = sqrt(z)
        sp = sqrt(p)
        lam = sx * (sy + sz) + sy * sz
        d = (sp + sx) * (sp + sy) * (sp + sz)
        e = delta * fac * fac * fac / (d * d)
        acc += fac / d * _rc(1.0, 1.0 + e)
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
    return fac * series / (a * sqrt(a)) + 6.0 * acc


cdef void _agm(double u, double m, double mc,
               double* sn, double* cn, double* dn) nogil:
    cdef double a = 1.0, b = sqrt(mc), c = sqrt(m), an, bn, phi
    cdef double as_[64]
    cdef double cs[64]
    cdef int n = 0, j
    as_[0] = a
    cs[0] = c
    while fabs(c) > 1e-16 * a and n < 60:
        an = 0.5 * (a + b)
        bn = sqrt(a * b)
        c = 0.5 * (a - b)
        a = an
        b = bn
        n += 1
        as_[n] = a
        cs[n] = c
    phi = ldexp(a * u, n)
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + asin(cs[j] * sin(phi) / as_[j]))
    sn[0] = sin(phi)
    cn[0] = cos(phi)
    dn[0] = sqrt(mc + m * cn[0] * cn[0])


cdef void _sncndn(double u, double m, double mc, double kk,
                  double* sn, double* cn, double* dn) nogil:
    cdef double sign = 1.0, flip = 1.0, cflip, r, s0, c0, d0, smc, t, s
    if m == 0.0:
        sn[0] = sin(u)
        cn[0] = cos(u)
        dn[0] = 1.0
        return
    if mc == 0.0:
        t = tanh(u)
        s = 1.0 / cosh(u)
        sn[0] = t
        cn[0] = s
        dn[0] = s
        return
    if kk < 0.0:
        kk = _rf(0.0, mc, 1.0)
    if u < 0.0:
        u = -u
        sign = -1.0
    r = fmod(u, 4.0 * kk)
    if r > 2.0 * kk:
        r -= 2.0 * kk
        flip = -1.0
    cflip = flip
    if r > kk:
        r = 2.0 * kk - r
        cflip = -flip
    if r > 0.5 * kk:
        _agm(kk - r, m, mc, &s0, &c0, &d0)
        smc = sqrt(mc)
        sn[0] = sign * flip * c0 / d0
        cn[0] = cflip * smc * s0 / d0
        dn[0] = smc / d0
    else:
        _agm(r, m, mc, &s0, &c0, &d0)
        sn[0] = sign * flip * s0
        cn[0] = cflip * c0
        dn[0] = d0


def carlson_rc(double x, double y):
    """R_C(x, y) = R_F(x, y, y) for x >= 0, y != 0 (Cauchy principal value for y < 0)."""
    return _rc(x, y)


def carlson_rf(double x, double y, double z):
    """Symmetric integral of the first kind R_F(x, y, z)."""
    if x < 0.0 or y < 0.0 or z < 0.0:
        raise ValueError("carlson_rf: arguments must be non-negative")
    if (x == 0.0) + (y == 0.0) + (z == 0.0) > 1:
        raise ZeroDivisionError("carlson_rf: at most one argument may vanish")
    return _rf(x, y, z)


def carlson_rd(double x, double y, double z):
    """Degenerate integral of the second kind R_D(x, y, z) = R_J(x, y, z, z)."""
    if x < 0.0 or y < 0.0 or z <= 0.0:
        raise ValueError("carlson_rd: need x, y >= 0 and z > 0")
    if x == 0.0 and y == 0.0:
        raise ZeroDivisionError("carlson_rd: x and y cannot both vanish")
    return _rd(x, y, z)


def carlson_rj(double x, double y, double z, double p):
    """Symmetric integral of the third kind R_J(x, y, z, p) for p > 0."""
    if x < 0.0 or y < 0.0 or z < 0.0 or p <= 0.0:
        raise ValueError("carlson_rj: need x, y, z >= 0 and p > 0")
    if (x == 0.0) + (y == 0.0) + (z == 0.0) > 1:
        raise ZeroDivisionError("carlson_rj: at most one of x, y, z may vanish")
    return _rj(x, y, z, p)


def sncndn(double u, double m, double mc, double kk=-1.0):
    """Return (sn, cn, dn)(u | m) for 0 <= m <= 1 with mc = 1 - m given separately."""
    cdef double sn, cn, dn
    _sncndn(u, m, mc, kk, &sn, &cn, &dn)
    return sn, cn, dn


def sncndn_array(u, double m, double mc):
    """Vectorised :func:`sncndn` over a 1-D float array ``u``."""
    cdef double[::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef Py_ssize_t n = uv.shape[0], i
    out_s = np.empty(n)
    out_c = np.empty(n)
    out_d = np.empty(n)
    cdef double[::1] sv = out_s
    cdef double[::1] cv = out_c
    cdef double[::1] dv = out_d
    cdef double kk = -1.0
    if m != 0.0 and mc != 0.0:
        kk = _rf(0.0, mc, 1.0)
    with nogil:
        for i in range(n):
            _sncndn(uv[i], m, mc, kk, &sv[i], &cv[i], &dv[i])
    return out_s, out_c, out_d


cdef double _sq_integral(double y, double m, double mc, bint sd):
    cdef double kk, half, r, part, s, c, d
    cdef double j
    cdef bint flip
    if m == 0.0:
        return 0.5 * y - 0.25 * sin(2.0 * y)
    kk = _rf(0.0, mc, 1.0)
    j = floor(y / (2.0 * kk))
    r = y - 2.0 * kk * j
    if r < 0.0:
        r = 0.0
    if sd:
        half = 2.0 / 3.0 * _rd(0.0, 1.0, mc)
    else:
        half = 2.0 / 3.0 * _rd(0.0, mc, 1.0)
    flip = r > kk
    if flip:
        r = 2.0 * kk - r
    _sncndn(r, m, mc, kk, &s, &c, &d)
    if s == 0.0:
        part = 0.0
    elif sd:
        part = s * s * s / 3.0 * _rd(c * c, 1.0, d * d)
    else:
        part = s * s * s / 3.0 * _rd(c * c, d * d, 1.0)
    if flip:
        part = half - part
    return j * half + part


def sn2_integral(double y, double m, double mc):
    """Integral of sn(t|m)^2 over [0, y] for y >= 0 and 0 <= m < 1."""
    return _sq_integral(y, m, mc, False)


def sd2_integral(double y, double m, double mc):
    """Integral of (sn/dn)(t|m)^2 over [0, y] for y >= 0 and 0 <= m < 1."""
    return _sq_integral(y, m, mc, True)
