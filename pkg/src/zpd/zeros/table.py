"""Zero tables, the counting function N(T), S(T) and the zero phases.

N and S are tied together by the exact relation

    N(T) = 1 + theta(T)/pi + S(T),

so S is computed from the (certified) table and theta.  At an ordinate the
midpoint convention applies to both N and S.  The phase attached to a zero is
the common one-sided limit of conj(e(S(T))) as T -> gamma; since S jumps by
an integer there, this equals exp(2 i theta(gamma)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import IncompleteTableError, InputError, TableParseError
from .theta import theta


@dataclass(frozen=True)
class ZeroEntry:
    index: int
    gamma: float
    s_at_gamma: float
    phase: complex
    multiplicity: int = 1


def _phases_and_midpoints(gamma: np.ndarray, mult: np.ndarray):
    if gamma.size == 0:
        return np.zeros(0), np.zeros(0, dtype=np.complex128)
    n_after = np.cumsum(mult)
    n_before = n_after - mult
    th_over_pi = theta(gamma) / math.pi
    s_mid = 0.5 * (n_before + n_after) - 1.0 - th_over_pi
    s_right = n_after - 1.0 - th_over_pi
    return s_mid, np.exp(-2j * math.pi * s_right)


class ZeroTable:
    """Ordered zeros of zeta on the critical line, complete up to ``height_max``.

    Stored column-wise; ``entries`` materialises :class:`ZeroEntry` objects
    on demand.
    """

    def __init__(self, gamma, height_max: float, source: str = "computed",
                 multiplicity=None, stats: dict | None = None):
        if source not in ("computed", "ingested"):
            raise InputError(f"unknown table source {source!r}")
        self.gamma = np.ascontiguousarray(gamma, dtype=np.float64)
        if multiplicity is None:
            multiplicity = np.ones(self.gamma.shape[0], dtype=np.int64)
        self.multiplicity = np.asarray(multiplicity, dtype=np.int64)
        if self.gamma.size and (np.any(np.diff(self.gamma) <= 0) or self.gamma[0] <= 0):
            raise InputError("ordinates must be positive and strictly increasing")
        if self.gamma.size and self.gamma[-1] > height_max:
            raise InputError("table contains ordinates above its certified height")
        self.height_max = float(height_max)
        self.source = source
        self.stats = dict(stats or {})
        self.s_at_gamma, self.phase = _phases_and_midpoints(self.gamma, self.multiplicity)
        self._cum = np.concatenate([[0], np.cumsum(self.multiplicity)])
        self._entries: list[ZeroEntry] | None = None

    def __len__(self) -> int:
        return int(self.gamma.shape[0])

    def __getitem__(self, i: int) -> ZeroEntry:
        if i < 0:
            i += len(self)
        return ZeroEntry(i + 1, float(self.gamma[i]), float(self.s_at_gamma[i]),
                         complex(self.phase[i]), int(self.multiplicity[i]))

    @property
    def entries(self) -> list[ZeroEntry]:
        if self._entries is None:
            self._entries = [self[i] for i in range(len(self))]
        return self._entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZeroTable):
            return NotImplemented
        return (self.height_max == other.height_max and self.source == other.source
                and np.array_equal(self.gamma, other.gamma)
                and np.array_equal(self.multiplicity, other.multiplicity))

    def __repr__(self) -> str:
        return f"ZeroTable({len(self)} zeros, height_max={self.height_max:g}, source={self.source!r})"

    def truncated(self, height: float) -> "ZeroTable":
        """The same zeros restricted to gamma <= height."""
        if height > self.height_max:
            raise IncompleteTableError(
                f"cannot extend table certified to {self.height_max:g} up to {height:g}",
                required_height=height)
        k = int(np.searchsorted(self.gamma, height, side="right"))
        return ZeroTable(self.gamma[:k], height, self.source, self.multiplicity[:k], self.stats)

    def require_height(self, height: float) -> None:
        if height > self.height_max:
            raise IncompleteTableError(
                f"zero table certified only to {self.height_max:g}, need {height:g}",
                required_height=height)

    def count_below(self, T):
        """N(T) with half weight at ordinates; vectorised, no height check."""
        T = np.asarray(T, dtype=np.float64)
        lo = np.searchsorted(self.gamma, T, side="left")
        hi = np.searchsorted(self.gamma, T, side="right")
        return 0.5 * (self._cum[lo] + self._cum[hi])


def count_N(T, table: ZeroTable):
    """Number of zeros with 0 < gamma <= T, counting a zero at T with half weight."""
    arr = np.asarray(T, dtype=np.float64)
    if np.any(arr <= 0):
        raise InputError("count_N needs T > 0")
    if np.any(arr > table.height_max):
        raise IncompleteTableError(
            f"T = {np.max(arr):g} exceeds the certified height {table.height_max:g}",
            required_height=float(np.max(arr)))
    out = table.count_below(arr)
    return float(out) if np.ndim(T) == 0 else out


def s_of_T(T, table: ZeroTable):
    """S(T) = N(T) - 1 - theta(T)/pi."""
    n = count_N(T, table)
    return n - 1.0 - theta(T) / math.pi


def zeta_phase(entry: ZeroEntry, table: ZeroTable) -> complex:
    """The unit phase of a zero: the limit of conj(e(S(T))) as T -> gamma."""
    i = entry.index - 1
    if not (0 <= i < len(table)) or table.gamma[i] != entry.gamma:
        raise InputError(f"zero #{entry.index} at {entry.gamma!r} is not in this table")
    s_right = float(table._cum[i + 1]) - 1.0 - theta(entry.gamma) / math.pi
    return complex(np.exp(-2j * math.pi * s_right))


def ingest_zero_table(path) -> ZeroTable:
    """Read a plain zero table: one ascending decimal ordinate per line.

    Lines starting with '#' and blank lines are skipped.  A repeated ordinate
    is read as a multiple zero.
    """
    path = Path(path)
    gam: list[float] = []
    mult: list[int] = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                g = float(line)
            except ValueError:
                raise TableParseError(f"not a decimal ordinate: {line!r}", lineno) from None
            if not math.isfinite(g) or g <= 0:
                raise TableParseError(f"ordinate must be positive and finite: {line!r}", lineno)
            if gam and g < gam[-1]:
                raise TableParseError(f"ordinate {line} is below the previous one", lineno)
            if gam and g == gam[-1]:
                mult[-1] += 1
                continue
            gam.append(g)
            mult.append(1)
    height = gam[-1] if gam else 0.0
    return ZeroTable(np.array(gam), height, "ingested", np.array(mult, dtype=np.int64))
