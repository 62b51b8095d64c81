# cython: language_level=3
"""Compiled inner loops.

Every function here has a numpy twin in ``_pycore`` with the same signature;
``zpd.kernels`` picks one at import time.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, exp, log, log1p, sqrt, floor, fabs, M_PI

cnp.import_array()

cdef double TWO_PI = 2.0 * M_PI
cdef double LOG_2PI_E = log(2.0 * M_PI) + 1.0


cdef inline double _horner(const double[:] c, int deg, double x) nogil:
    cdef double acc = 0.0
    cdef int i
    for i in range(deg, -1, -1):
        acc = acc * x + c[i]
    return acc


cdef inline double _theta_tail(double t) nogil:
    # theta(t) - (t/2) log(t/(2 pi e)) + pi/8, asymptotic, t >= 10
    cdef double r = 1.0 / t
    cdef double r2 = r * r
    return r * (1.0 / 48.0 + r2 * (7.0 / 5760.0 + r2 * (31.0 / 80640.0
               + r2 * (127.0 / 430080.0 + r2 * (511.0 / 1216512.0)))))


def rs_z(const double[::1] t, const double[:, ::1] coeffs):
    """Hardy Z by the Riemann-Siegel main sum plus the correction series.

    ``coeffs[k]`` holds the Taylor coefficients of C_k in powers of p - 1/2.
    """
    cdef Py_ssize_t m = t.shape[0]
    cdef int nterms = coeffs.shape[0]
    cdef int deg = coeffs.shape[1] - 1
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] res = out
    cdef Py_ssize_t j
    cdef int n, N, k
    cdef double tt, tau, s, p, x, tail, acc, corr, tpow, rtau, base
    with nogil:
        for j in range(m):
            tt = t[j]
            tau = tt / TWO_PI
            s = sqrt(tau)
            N = <int>floor(s)
            p = s - N
            tail = _theta_tail(tt) - M_PI / 8.0
            base = tt / (TWO_PI * exp(1.0))
            acc = 0.0
            for n in range(1, N + 1):
                acc += cos(0.5 * tt * log(base / (<double>n * n)) + tail) / sqrt(<double>n)
            x = p - 0.5
            rtau = 1.0 / s
            corr = 0.0
            tpow = 1.0
            for k in range(nterms):
                corr += _horner(coeffs[k], deg, x) * tpow
                tpow *= rtau
            if N % 2 == 0:
                corr = -corr
            res[j] = 2.0 * acc + corr / sqrt(s)
    return out


def em_zeta(const double[::1] t, const double[::1] bern, int extra):
    """zeta(1/2 + it) by Euler-Maclaurin; ``bern[k-1] = B_{2k}/(2k)!``."""
    cdef Py_ssize_t m = t.shape[0]
    cdef int M = bern.shape[0]
    out = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] res = out
    cdef Py_ssize_t j
    cdef int n, N, k
    cdef double tt, ln, amp, re, im, NN
    cdef double complex s, Ns, z, poch, pw
    with nogil:
        for j in range(m):
            tt = t[j]
            N = <int>(((tt + 2.0 * M + extra) / M_PI) + 1.0)
            re = 0.0
            im = 0.0
            for n in range(1, N):
                ln = log(<double>n)
                amp = 1.0 / sqrt(<double>n)
                re += amp * cos(tt * ln)
                im -= amp * sin(tt * ln)
            NN = <double>N
            ln = log(NN)
            s = 0.5 + 1j * tt
            Ns = (cos(tt * ln) - 1j * sin(tt * ln)) / sqrt(NN)
            z = re + 1j * im
            z = z + NN * Ns / (s - 1.0) + 0.5 * Ns
            poch = s
            pw = Ns / NN
            for k in range(1, M + 1):
                z = z + bern[k - 1] * poch * pw
                poch = poch * (s + 2 * k - 1) * (s + 2 * k)
                pw = pw / (NN * NN)
            res[j] = z
    return out


cdef inline double _sigma(double x) nogil:
    if x <= 0.0:
        return 0.0
    return exp(-1.0 / x)


cdef inline double _step(double x) nogil:
    cdef double s0, s1
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    s0 = _sigma(x)
    s1 = _sigma(1.0 - x)
    return s0 / (s0 + s1)


cdef inline double _bump(double u, int kind, double a, double b, double c, double d) nogil:
    if u <= a or u >= b:
        return 0.0
    if kind == 0:
        return exp(-1.0 / ((u - a) * (b - u)))
    if u < c:
        return _step((u - a) / (c - a))
    if u > d:
        return _step((b - u) / (b - d))
    return 1.0


def bump_eval(const double[::1] u, int kind, double a, double b, double c, double d):
    cdef Py_ssize_t m = u.shape[0]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] res = out
    cdef Py_ssize_t j
    with nogil:
        for j in range(m):
            res[j] = _bump(u[j], kind, a, b, c, d)
    return out


def osc_panels(const double[::1] lo, const double[::1] hi,
               int phase_kind, double p1, double p2,
               int amp_kind, double power, double scale,
               int bump_kind, double a, double b, double c, double d,
               const double[::1] xk, const double[::1] wk, const double[::1] wg):
    """Gauss-Kronrod sums of amp(v) exp(i (psi(v) - psi(mid))) on each panel.

    phase_kind 0: psi = p1 v + p2 log v; 1: psi = p1 v^2.
    amp_kind 0: bump(v) v^power; 1: bump(v) (1 - 1/(u^3 - u)), u = scale v;
    2: v^power.
    ``xk`` are the 21 Kronrod nodes on [-1, 1]; Gauss nodes are the odd ones.
    """
    cdef Py_ssize_t m = lo.shape[0]
    cdef int nk = xk.shape[0]
    kout = np.empty(m, dtype=np.complex128)
    gout = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] kres = kout
    cdef double complex[::1] gres = gout
    cdef Py_ssize_t j
    cdef int q
    cdef double mid, half, dv, v, dpsi, amp, u, kr, ki, gr, gi, cr, ci
    with nogil:
        for j in range(m):
            mid = 0.5 * (lo[j] + hi[j])
            half = 0.5 * (hi[j] - lo[j])
            kr = 0.0
            ki = 0.0
            gr = 0.0
            gi = 0.0
            for q in range(nk):
                dv = half * xk[q]
                v = mid + dv
                if phase_kind == 0:
                    dpsi = p1 * dv + p2 * log1p(dv / mid)
                else:
                    dpsi = p1 * dv * (2.0 * mid + dv)
                if amp_kind == 0:
                    amp = _bump(v, bump_kind, a, b, c, d)
                    if amp != 0.0:
                        amp = amp * exp(power * log(v))
                elif amp_kind == 1:
                    amp = _bump(v, bump_kind, a, b, c, d)
                    if amp != 0.0:
                        u = scale * v
                        amp = amp * (1.0 - 1.0 / (u * u * u - u))
                else:
                    amp = exp(power * log(v))
                cr = amp * cos(dpsi)
                ci = amp * sin(dpsi)
                kr += wk[q] * cr
                ki += wk[q] * ci
                if q % 2 == 1:
                    gr += wg[q // 2] * cr
                    gi += wg[q // 2] * ci
            kres[j] = half * (kr + 1j * ki)
            gres[j] = half * (gr + 1j * gi)
    return kout, gout


def kahan_sum(const double[::1] x):
    """Compensated sum in index order."""
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t j
    cdef double s = 0.0, comp = 0.0, y, tmp
    with nogil:
        for j in range(m):
            y = x[j] - comp
            tmp = s + y
            comp = (tmp - s) - y
            s = tmp
    return s


def fnv1a64(const unsigned char[::1] data):
    """64-bit FNV-1a hash."""
    cdef unsigned long long h = 0xCBF29CE484222325ULL
    cdef Py_ssize_t j
    with nogil:
        for j in range(data.shape[0]):
            h = (h ^ data[j]) * 0x100000001B3ULL
    return h
