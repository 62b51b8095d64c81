"""Zero search on the critical line with a counting certificate.

Z is sampled at Gram points g_{-1}, g_0, ... and the Gram points are split
into Gram blocks between consecutive good points ((-1)^n Z(g_n) > 0).  A block
of length L must show L sign changes (Rosser's rule); deficient blocks are
resampled on finer grids.  Completeness below the first good Gram point g_n
past the target height is certified by Brent's criterion: K consecutive
Rosser blocks after g_n with K >= 0.0061 log^2 g + 0.08 log g give
N(g_n) <= n + 1, and the sign changes give the matching lower bound.

Work is split into fixed chunks that do not depend on the worker count, and
each Z value depends only on its own argument, so the table is bit-identical
for any number of workers.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ..errors import CompletenessError, InputError
from .hardy import DEFAULT_CEILING, hardy_Z
from .table import ZeroTable
from .theta import gram_point, theta

log = logging.getLogger(__name__)

CHUNK = 4096
MAX_SUBDIVISION = 4096
XTOL = 1e-11


def _z_chunk(t: np.ndarray) -> np.ndarray:
    return hardy_Z(t, ceiling=math.inf)


def _pmap(func, chunks, workers: int):
    if workers <= 1 or len(chunks) <= 1:
        return [func(c) for c in chunks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(func, chunks))


def _z_many(t: np.ndarray, workers: int) -> np.ndarray:
    if t.size == 0:
        return np.zeros(0)
    chunks = [t[i:i + CHUNK] for i in range(0, t.size, CHUNK)]
    return np.concatenate(_pmap(_z_chunk, chunks, workers))


def brent_blocks_needed(g: float) -> int:
    L = math.log(g)
    return max(1, math.ceil(0.0061 * L * L + 0.08 * L))


def _refine_chunk(args) -> np.ndarray:
    """Batched Illinois iteration with a bisection every third step."""
    lo, hi, flo, fhi = (np.array(a, dtype=np.float64) for a in args)
    tol = np.maximum(XTOL, 4.0 * np.spacing(hi))
    active = (hi - lo) > tol
    side = np.zeros(lo.shape, dtype=np.int8)
    it = 0
    while np.any(active) and it < 200:
        it += 1
        idx = np.nonzero(active)[0]
        a, b, fa, fb = lo[idx], hi[idx], flo[idx], fhi[idx]
        if it % 3 == 0:
            x = 0.5 * (a + b)
        else:
            x = (a * fb - b * fa) / (fb - fa)
            bad = ~((x > a) & (x < b))
            x[bad] = 0.5 * (a[bad] + b[bad])
        fx = hardy_Z(x, ceiling=math.inf)
        left = np.sign(fx) == np.sign(fa)
        # root lies in [x, b]
        li = idx[left]
        lo[li] = x[left]
        flo[li] = fx[left]
        fhi[li] = np.where(side[li] == 1, 0.5 * fhi[li], fhi[li])
        side[li] = 1
        # root lies in [a, x]
        ri = idx[~left]
        hi[ri] = x[~left]
        fhi[ri] = fx[~left]
        flo[ri] = np.where(side[ri] == -1, 0.5 * flo[ri], flo[ri])
        side[ri] = -1
        exact = fx == 0.0
        if np.any(exact):
            ei = idx[exact]
            lo[ei] = hi[ei] = x[exact]
        active[idx] = (hi[idx] - lo[idx]) > tol[idx]
    return 0.5 * (lo + hi)


def _sign_changes(t: np.ndarray, z: np.ndarray):
    s = np.sign(z)
    k = np.nonzero(s[:-1] * s[1:] < 0)[0]
    return t[k], t[k + 1], z[k], z[k + 1]


def _resolve_block(t_lo: float, t_hi: float, z_lo: float, z_hi: float,
                   length: int, gram: np.ndarray, zg: np.ndarray, stats: dict):
    """Brackets for a Gram block, resampling until Rosser's rule is met."""
    br = _sign_changes(gram, zg)
    if br[0].size >= length:
        return br
    stats["deficient_blocks"] += 1
    level = 2
    while level <= MAX_SUBDIVISION:
        pieces = [np.linspace(gram[i], gram[i + 1], level + 1)[:-1] for i in range(length)]
        t = np.concatenate(pieces + [gram[-1:]])
        z = np.empty_like(t)
        z[::level] = zg
        mask = np.ones(t.size, dtype=bool)
        mask[::level] = False
        z[mask] = hardy_Z(t[mask], ceiling=math.inf)
        stats["evaluations"] += int(mask.sum())
        br = _sign_changes(t, z)
        if br[0].size >= length:
            return br
        level *= 2
    raise CompletenessError(
        f"Rosser's rule fails on Gram block [{t_lo!r}, {t_hi!r}] "
        f"({br[0].size} of {length} sign changes found)",
        interval=(float(t_lo), float(t_hi)))


def find_zeros(height_max: float, workers: int = 1, ceiling: float = DEFAULT_CEILING) -> ZeroTable:
    """All zeros 0 < gamma <= height_max, refined to about 1e-11."""
    if not (height_max >= 0 and math.isfinite(height_max)):
        raise InputError("height_max must be a finite non-negative number")
    if height_max > ceiling:
        raise InputError(f"height {height_max:g} is above the configured ceiling {ceiling:g}")
    t0 = time.perf_counter()
    stats = {"evaluations": 0, "deficient_blocks": 0, "gram_points": 0, "blocks": 0}

    H = max(height_max, 20.0)
    n_hi = int(math.ceil(theta(H) / math.pi)) + 1
    margin = 2 * brent_blocks_needed(gram_point(n_hi)) + 16
    ns = np.arange(-1, n_hi + margin + 1)
    g = gram_point(ns)
    zg = _z_many(g, workers)

    while True:
        good = np.nonzero((np.where(ns % 2 == 0, 1.0, -1.0) * zg) > 0)[0]
        past = good[g[good] >= height_max]
        if past.size:
            j_star = past[0]
            K = brent_blocks_needed(g[j_star])
            after = good[good >= j_star]
            if after.size >= K + 1:
                break
        extra = max(64, ns.size // 8)
        new_n = np.arange(ns[-1] + 1, ns[-1] + 1 + extra)
        new_g = gram_point(new_n)
        ns = np.concatenate([ns, new_n])
        g = np.concatenate([g, new_g])
        zg = np.concatenate([zg, _z_many(new_g, workers)])
    stats["gram_points"] = int(ns.size)
    stats["evaluations"] += int(ns.size)
    if good[0] != 0:
        raise CompletenessError("g_{-1} is not a good Gram point", interval=(0.0, float(g[0])))

    # Gram blocks from g_{-1} to the K-th block past j_star
    end = after[K]
    lows, highs, flows, fhighs = [], [], [], []
    blocks = good[good <= end]
    for j, k in zip(blocks[:-1], blocks[1:]):
        L = int(k - j)
        gb, zb = g[j:k + 1], zg[j:k + 1]
        br = _resolve_block(g[j], g[k], zg[j], zg[k], L, gb, zb, stats)
        stats["blocks"] += 1
        if k <= j_star:
            lows.append(br[0])
            highs.append(br[1])
            flows.append(br[2])
            fhighs.append(br[3])
    lo = np.concatenate(lows) if lows else np.zeros(0)
    hi = np.concatenate(highs) if highs else np.zeros(0)
    flo = np.concatenate(flows) if flows else np.zeros(0)
    fhi = np.concatenate(fhighs) if fhighs else np.zeros(0)

    n_star = int(ns[j_star])
    if lo.size != n_star + 1:
        raise CompletenessError(
            f"found {lo.size} sign changes below g_{n_star} = {g[j_star]!r}, "
            f"the counting bound requires exactly {n_star + 1}",
            interval=(0.0, float(g[j_star])))
    stats["brent_K"] = int(K)
    stats["certified_to"] = float(g[j_star])

    chunks = [(lo[i:i + CHUNK], hi[i:i + CHUNK], flo[i:i + CHUNK], fhi[i:i + CHUNK])
              for i in range(0, lo.size, CHUNK)]
    gam = np.concatenate(_pmap(_refine_chunk, chunks, workers)) if chunks else np.zeros(0)
    gam = gam[gam <= height_max]
    stats["seconds"] = time.perf_counter() - t0
    log.info("find_zeros(%g): %d zeros, %d Gram points, %d deficient blocks",
             height_max, gam.size, stats["gram_points"], stats["deficient_blocks"])
    return ZeroTable(gam, height_max, "computed", stats=stats)


def sign_change_count(T: float, step: float = 0.01) -> int:
    """Brute-force count of sign changes of Z on [1, T] (a cross-check)."""
    t = np.arange(1.0, T + step, step)
    t = t[t <= T]
    z = hardy_Z(t, ceiling=math.inf)
    s = np.sign(z)
    return int(np.sum(s[:-1] * s[1:] < 0))
