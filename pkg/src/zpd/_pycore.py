"""Pure numpy versions of the kernels in ``_core.pyx``.

Same signatures and same operation order where it matters (``kahan_sum``
reproduces the compiled loop bit for bit).
"""

from __future__ import annotations

import math

import numpy as np

TWO_PI = 2.0 * math.pi


def _theta_tail(t):
    r = 1.0 / t
    r2 = r * r
    return r * (1.0 / 48.0 + r2 * (7.0 / 5760.0 + r2 * (31.0 / 80640.0
                + r2 * (127.0 / 430080.0 + r2 * (511.0 / 1216512.0)))))


def rs_z(t, coeffs):
    t = np.asarray(t, dtype=np.float64)
    coeffs = np.asarray(coeffs, dtype=np.float64)
    out = np.empty(t.shape[0])
    if t.size == 0:
        return out
    tau = t / TWO_PI
    s = np.sqrt(tau)
    N = np.floor(s).astype(np.int64)
    p = s - N
    tail = _theta_tail(t) - math.pi / 8.0
    base = t / (TWO_PI * math.exp(1.0))
    nmax = int(N.max())
    n = np.arange(1, nmax + 1, dtype=np.float64)
    inv_sqrt = 1.0 / np.sqrt(n)
    # row-wise so each t sees exactly the same array regardless of batch
    for j in range(t.shape[0]):
        nj = int(N[j])
        arg = 0.5 * t[j] * np.log(base[j] / (n[:nj] * n[:nj])) + tail[j]
        out[j] = 2.0 * np.sum(np.cos(arg) * inv_sqrt[:nj])
    x = p - 0.5
    corr = np.zeros_like(t)
    tpow = np.ones_like(t)
    for k in range(coeffs.shape[0]):
        corr += np.polynomial.polynomial.polyval(x, coeffs[k]) * tpow
        tpow = tpow / s
    corr = np.where(N % 2 == 0, -corr, corr)
    return out + corr / np.sqrt(s)


def em_zeta(t, bern, extra):
    t = np.asarray(t, dtype=np.float64)
    bern = np.asarray(bern, dtype=np.float64)
    M = bern.shape[0]
    out = np.empty(t.shape[0], dtype=np.complex128)
    for j, tt in enumerate(t):
        N = int((tt + 2.0 * M + extra) / math.pi + 1.0)
        n = np.arange(1, N, dtype=np.float64)
        ln = np.log(n)
        amp = 1.0 / np.sqrt(n)
        z = complex(np.sum(amp * np.cos(tt * ln)), -np.sum(amp * np.sin(tt * ln)))
        NN = float(N)
        lnN = math.log(NN)
        s = complex(0.5, tt)
        Ns = complex(math.cos(tt * lnN), -math.sin(tt * lnN)) / math.sqrt(NN)
        z = z + NN * Ns / (s - 1.0) + 0.5 * Ns
        poch = s
        pw = Ns / NN
        for k in range(1, M + 1):
            z = z + bern[k - 1] * poch * pw
            poch = poch * (s + 2 * k - 1) * (s + 2 * k)
            pw = pw / (NN * NN)
        out[j] = z
    return out


def _step(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    out[x >= 1.0] = 1.0
    inner = (x > 0.0) & (x < 1.0)
    xi = x[inner]
    s0 = np.exp(-1.0 / xi)
    s1 = np.exp(-1.0 / (1.0 - xi))
    out[inner] = s0 / (s0 + s1)
    return out


def bump_eval(u, kind, a, b, c, d):
    u = np.asarray(u, dtype=np.float64)
    out = np.zeros_like(u)
    inside = (u > a) & (u < b)
    ui = u[inside]
    if kind == 0:
        out[inside] = np.exp(-1.0 / ((ui - a) * (b - ui)))
        return out
    vals = np.ones_like(ui)
    left = ui < c
    right = ui > d
    vals[left] = _step((ui[left] - a) / (c - a))
    vals[right] = _step((b - ui[right]) / (b - d))
    out[inside] = vals
    return out


def osc_panels(lo, hi, phase_kind, p1, p2, amp_kind, power, scale,
               bump_kind, a, b, c, d, xk, wk, wg):
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    xk = np.asarray(xk)
    wk = np.asarray(wk)
    wg = np.asarray(wg)
    mid = 0.5 * (lo + hi)[:, None]
    half = 0.5 * (hi - lo)[:, None]
    dv = half * xk[None, :]
    v = mid + dv
    if phase_kind == 0:
        dpsi = p1 * dv + p2 * np.log1p(dv / mid)
    else:
        dpsi = p1 * dv * (2.0 * mid + dv)
    if amp_kind == 0:
        amp = bump_eval(v.ravel(), bump_kind, a, b, c, d).reshape(v.shape)
        nz = amp != 0.0
        amp[nz] = amp[nz] * np.exp(power * np.log(v[nz]))
    elif amp_kind == 1:
        amp = bump_eval(v.ravel(), bump_kind, a, b, c, d).reshape(v.shape)
        nz = amp != 0.0
        u = scale * v[nz]
        amp[nz] = amp[nz] * (1.0 - 1.0 / (u * u * u - u))
    else:
        amp = np.exp(power * np.log(v))
    cr = amp * np.cos(dpsi)
    ci = amp * np.sin(dpsi)
    k = half[:, 0] * ((cr @ wk) + 1j * (ci @ wk))
    g = half[:, 0] * ((cr[:, 1::2] @ wg) + 1j * (ci[:, 1::2] @ wg))
    return k, g


def kahan_sum(x):
    s = 0.0
    comp = 0.0
    for val in np.asarray(x, dtype=np.float64).tolist():
        y = val - comp
        tmp = s + y
        comp = (tmp - s) - y
        s = tmp
    return s


def fnv1a64(data):
    """64-bit FNV-1a hash."""
    h = 0xCBF29CE484222325
    for byte in bytes(data):
        h = ((h ^ byte) * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h
