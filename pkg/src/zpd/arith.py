"""Elementary arithmetic: Lambda, mu, phi, Dirichlet characters, Gauss and
Ramanujan sums.

Character values are stored exactly as exponents: chi(n) = e(k(n)/E) with E
the exponent of the unit group, k(n) = -1 marking non-units.  Every root of
unity is evaluated from its reduced rational angle by :func:`unit_root`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import InputError, PreconditionError

MAX_CHAR_MODULUS = 10_000


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division."""
    if n < 1:
        raise InputError(f"factorize needs n >= 1, got {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def von_mangoldt(n: int) -> float:
    if n < 1:
        raise InputError(f"Lambda(n) needs n >= 1, got {n}")
    f = factorize(n)
    return math.log(next(iter(f))) if len(f) == 1 else 0.0


def mobius(q: int) -> int:
    f = factorize(q)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(q: int) -> int:
    out = q
    for p in factorize(q):
        out = out // p * (p - 1)
    return out


# -- sieves -----------------------------------------------------------------

def prime_sieve(n: int) -> np.ndarray:
    """Primes <= n."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_p[p]:
            is_p[p * p::p] = False
    return np.nonzero(is_p)[0].astype(np.int64)


def mangoldt_sieve(n: int) -> np.ndarray:
    """Lambda(0..n) as an array (Lambda(0) := 0)."""
    out = np.zeros(n + 1)
    for p in prime_sieve(n).tolist():
        lp = math.log(p)
        pk = p
        while pk <= n:
            out[pk] = lp
            pk *= p
    return out


def mobius_sieve(n: int) -> np.ndarray:
    mu = np.ones(n + 1, dtype=np.int64)
    mu[0] = 0
    for p in prime_sieve(n).tolist():
        mu[p::p] *= -1
        mu[p * p::p * p] = 0
    return mu


def phi_sieve(n: int) -> np.ndarray:
    phi = np.arange(n + 1, dtype=np.int64)
    for p in prime_sieve(n).tolist():
        phi[p::p] -= phi[p::p] // p
    return phi


def prime_powers_in(lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    """Prime powers n with lo <= n <= hi, ascending, and Lambda(n)."""
    n_lo = max(2, math.ceil(lo))
    n_hi = math.floor(hi)
    if n_hi < n_lo:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    ns, lams = [], []
    for p in prime_sieve(n_hi).tolist():
        lp = math.log(p)
        pk = p
        while pk <= n_hi:
            if pk >= n_lo:
                ns.append(pk)
                lams.append(lp)
            pk *= p
    order = np.argsort(ns, kind="stable")
    return np.asarray(ns, dtype=np.int64)[order], np.asarray(lams)[order]


# -- roots of unity -----------------------------------------------------------

def unit_root(num: int, den: int) -> complex:
    """e(num/den) = exp(2 pi i num/den), with the angle reduced exactly."""
    if den <= 0:
        raise InputError("denominator must be positive")
    r = Fraction(num % den, den)
    # nearest quarter turn, then a residual angle of at most 1/8 turn
    k = math.floor(4 * r + Fraction(1, 2))
    y = float(r - Fraction(k, 4))
    c = math.cos(2.0 * math.pi * y)
    s = math.sin(2.0 * math.pi * y)
    k %= 4
    if k == 0:
        return complex(c, s)
    if k == 1:
        return complex(-s, c)
    if k == 2:
        return complex(-c, -s)
    return complex(s, -c)


@lru_cache(maxsize=256)
def _root_table(den: int) -> np.ndarray:
    return np.array([unit_root(k, den) for k in range(den)], dtype=np.complex128)


def _csum(values) -> complex:
    vals = np.asarray(values, dtype=np.complex128)
    return complex(math.fsum(vals.real.tolist()), math.fsum(vals.imag.tolist()))


# -- twists -------------------------------------------------------------------

@dataclass(frozen=True)
class ModularTwist:
    """The rational xi = m/q with 0 < m < q and gcd(m, q) = 1."""

    m: int
    q: int

    def __post_init__(self):
        if not (0 < self.m < self.q):
            raise InputError(f"twist needs 0 < m < q, got {self.m}/{self.q}")
        if math.gcd(self.m, self.q) != 1:
            raise InputError(f"twist {self.m}/{self.q} is not in lowest terms")

    @classmethod
    def parse(cls, text: str) -> "ModularTwist":
        try:
            m, q = (int(s) for s in text.strip().split("/"))
        except ValueError:
            raise InputError(f"twist must look like M/Q, got {text!r}") from None
        return cls(m, q)

    @property
    def value(self) -> Fraction:
        return Fraction(self.m, self.q)

    @property
    def xi(self) -> float:
        return self.m / self.q

    def __str__(self) -> str:
        return f"{self.m}/{self.q}"


# -- characters ---------------------------------------------------------------

def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    fs = list(factorize(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in fs):
            return g
    raise ArithmeticError(f"no primitive root mod {p}")


def _components(q: int):
    """Cyclic factors of (Z/q)^x as (generator mod q, order, log table mod q)."""
    comps = []
    for p, e in sorted(factorize(q).items()) if q > 1 else []:
        pe = p ** e
        rest = q // pe

        def lift(x, pe=pe, rest=rest):
            # the unit of Z/q that is x mod p^e and 1 mod the other factors
            if rest == 1:
                return x % q
            return (x * rest * pow(rest, -1, pe) + pe * pow(pe, -1, rest)) % q

        if p == 2:
            if e == 1:
                continue
            gens = [(pe - 1, 2)] if e == 2 else [(pe - 1, 2), (5, 2 ** (e - 2))]
            for g, order in gens:
                comps.append((p, pe, g, order, lift))
        else:
            g = primitive_root(p)
            if e > 1 and pow(g, p - 1, p * p) == 1:
                g += p
            comps.append((p, pe, g, pe // p * (p - 1), lift))
    return comps


def _discrete_logs(q: int):
    """For each component, the exponent of every unit n mod q."""
    comps = _components(q)
    units = [n for n in range(q) if math.gcd(n, q) == 1]
    logs = np.zeros((len(comps), q), dtype=np.int64)
    by_prime: dict[int, list[int]] = {}
    for ci, c in enumerate(comps):
        by_prime.setdefault(c[0], []).append(ci)
    for p, cis in by_prime.items():
        pe = comps[cis[0]][1]
        gens = [(comps[ci][2], comps[ci][3]) for ci in cis]
        table = {}
        for exps in product(*(range(o) for _, o in gens)):
            val = 1
            for (g, _), k in zip(gens, exps):
                val = val * pow(g, k, pe) % pe
            table[val] = exps
        for n in units:
            exps = table[n % pe]
            for ci, k in zip(cis, exps):
                logs[ci, n] = k
    return comps, logs


def _group_exponent(orders) -> int:
    E = 1
    for o in orders:
        E = E * o // math.gcd(E, o)
    return E


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    """A character mod q given by exact exponents chi(n) = e(k(n)/E)."""

    modulus: int
    exponents: np.ndarray = field(repr=False)
    order_base: int
    index: int = 0

    def __post_init__(self):
        ex = np.asarray(self.exponents, dtype=np.int64)
        ex.setflags(write=False)
        object.__setattr__(self, "exponents", ex)

    @property
    def values(self) -> np.ndarray:
        ex = self.exponents
        out = np.zeros(self.modulus, dtype=np.complex128)
        unit = ex >= 0
        out[unit] = _root_table(self.order_base)[ex[unit]]
        return out

    def __call__(self, n: int) -> complex:
        k = int(self.exponents[n % self.modulus])
        return 0j if k < 0 else complex(_root_table(self.order_base)[k])

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirichletCharacter) or other.modulus != self.modulus:
            return NotImplemented
        a = self.exponents * (other.order_base // math.gcd(self.order_base, other.order_base))
        b = other.exponents * (self.order_base // math.gcd(self.order_base, other.order_base))
        L = self.order_base * other.order_base // math.gcd(self.order_base, other.order_base)
        return bool(np.all(np.where(a >= 0, a % L, -1) == np.where(b >= 0, b % L, -1)))

    def __hash__(self) -> int:
        return hash((self.modulus, self.index))

    @property
    def is_principal(self) -> bool:
        return bool(np.all(self.exponents[self.exponents >= 0] == 0))

    @property
    def is_real(self) -> bool:
        ex = self.exponents[self.exponents >= 0]
        return bool(np.all((2 * ex) % self.order_base == 0))

    @property
    def parity(self) -> int:
        if self.modulus <= 2:
            return 1
        k = int(self.exponents[self.modulus - 1])
        return 1 if k == 0 else -1

    @property
    def conductor(self) -> int:
        return _conductor(self)

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def conj(self) -> "DirichletCharacter":
        ex = np.where(self.exponents >= 0, (-self.exponents) % self.order_base, -1)
        return DirichletCharacter(self.modulus, ex, self.order_base, -1)

    def __repr__(self) -> str:
        return f"DirichletCharacter(q={self.modulus}, index={self.index})"


def _conductor(chi: DirichletCharacter) -> int:
    q = chi.modulus
    ex = chi.exponents
    if q == 1:
        return 1
    for d in sorted(divisor for divisor in range(1, q + 1) if q % divisor == 0):
        ns = np.arange(1, q, d) if d < q else np.array([1])
        ns = ns[np.gcd(ns, q) == 1]
        if np.all(ex[ns] == 0):
            return d
    return q


@lru_cache(maxsize=64)
def characters_mod(q: int) -> tuple[DirichletCharacter, ...]:
    """All phi(q) characters mod q, principal first, in a fixed order.

    Characters are enumerated by their exponent vectors on the cyclic
    components of the unit group, in lexicographic order.
    """
    if not (1 <= q <= MAX_CHAR_MODULUS):
        raise InputError(f"modulus must lie in [1, {MAX_CHAR_MODULUS}], got {q}")
    comps, logs = _discrete_logs(q)
    orders = [c[3] for c in comps]
    E = _group_exponent(orders)
    nonunit = np.array([math.gcd(n, q) != 1 for n in range(q)])
    if q == 1:
        nonunit[:] = False
    out = []
    for idx, a in enumerate(product(*(range(o) for o in orders))):
        ex = np.zeros(q, dtype=np.int64)
        for ci, (ak, o) in enumerate(zip(a, orders)):
            ex += ak * (E // o) * logs[ci]
        ex %= E
        ex[nonunit] = -1
        out.append(DirichletCharacter(q, ex, E, idx))
    return tuple(out)


def quadratic_character(q: int) -> DirichletCharacter:
    """The first real non-principal character mod q, primitive ones preferred."""
    real = [c for c in characters_mod(q) if c.is_real and not c.is_principal]
    if not real:
        raise InputError(f"there is no quadratic character mod {q}")
    prim = [c for c in real if c.is_primitive]
    return (prim or real)[0]


def select_character(q: int, which) -> DirichletCharacter:
    """``which`` is an index into :func:`characters_mod` or ``"quadratic"``."""
    if isinstance(which, str) and which.strip().lower() == "quadratic":
        return quadratic_character(q)
    chars = characters_mod(q)
    i = int(which)
    if not 0 <= i < len(chars):
        raise InputError(f"character index {i} out of range for q = {q}")
    return chars[i]


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_{n mod q} chi(n) e(n/q)."""
    q = chi.modulus
    ex = chi.exponents
    E = chi.order_base
    L = q * E // math.gcd(q, E)
    n = np.arange(q)
    unit = ex >= 0
    angles = (ex[unit] * (L // E) + n[unit] * (L // q)) % L
    return _csum(_root_table(L)[angles])


def ramanujan_sum(q: int, m: int) -> complex:
    """sum over a mod q with (a, q) = 1 of e(-am/q)."""
    if not (0 < m < q) or math.gcd(m, q) != 1:
        raise PreconditionError(f"Ramanujan sum needs 0 < m < q coprime, got m={m}, q={q}")
    a = np.array([x for x in range(q) if math.gcd(x, q) == 1], dtype=np.int64)
    return _csum(_root_table(q)[(-a * m) % q])


def _inversion_sum(chi: DirichletCharacter, n: int) -> complex:
    q = chi.modulus
    ex = chi.exponents
    E = chi.order_base
    L = q * E // math.gcd(q, E)
    m = np.arange(q)
    unit = ex >= 0
    angles = (-ex[unit] * (L // E) - n * m[unit] * (L // q)) % L
    return _csum(_root_table(L)[angles])


def char_inversion_check(chi: DirichletCharacter, n: int) -> tuple[complex, complex]:
    """chi(n) against (tau(chi) / q) sum_m conj(chi(m)) e(-nm/q).

    The factor chi(-1) is absent here: with e(-nm/q) in the sum the identity
    holds without it, and inserting it flips the sign for odd characters
    (see :func:`printed_inversion_rhs`).
    """
    q = chi.modulus
    if q <= 1 or not chi.is_primitive:
        raise PreconditionError("the inversion identity needs a primitive character mod q > 1")
    return chi(n), gauss_sum(chi) / q * _inversion_sum(chi, n)


def printed_inversion_rhs(chi: DirichletCharacter, n: int) -> complex:
    """(chi(-1) tau(chi) / q) sum_m conj(chi(m)) e(-nm/q); equals chi(-1) chi(n)."""
    if chi.modulus <= 1 or not chi.is_primitive:
        raise PreconditionError("the inversion identity needs a primitive character mod q > 1")
    return chi.parity * gauss_sum(chi) / chi.modulus * _inversion_sum(chi, n)
