"""Brute-force ground truth for small fields.

Everything here is computed by exhaustive counting from a discrete-log
table built independently of the verification engine:

* ``x`` is *e-free* iff ``x != 0`` and no prime of ``e`` divides ``log x``;
  primitive roots are exactly the ``(q-1)``-free elements.
* ``N(e1, e2)`` counts ``g`` with ``g`` e1-free and ``a - c*g`` e2-free.
* The combinatorial sieve inequality, the character-sum style bounds on
  ``N`` and the final lower bound used to certify membership are checked
  against those counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from . import _kernels as K
from .gfq import _polymulmod, find_primitive_modulus
from .gfp import least_primitive_root
from .numthy import FactorProfile, classify_prime_power, factor_profile, prime_powers_in

KNOWN_EXCEPTIONS = (3, 4, 5, 7, 11, 13, 19, 31, 43, 61)
TIE_MARGIN = 1e-6


@dataclass(frozen=True, eq=False)
class FreenessIndex:
    """Discrete logarithms of ``F_q`` with respect to a fixed generator.

    ``exp[j]`` is the packed value of ``g**j``; ``dlog`` inverts it and has
    ``dlog[0] = -1``.
    """

    q: int
    p: int
    k: int
    profile: FactorProfile
    exp: np.ndarray
    dlog: np.ndarray

    @cached_property
    def primitive_by_log(self) -> np.ndarray:
        j = np.arange(self.q - 1)
        return (np.gcd(j, self.q - 1) == 1).astype(np.uint8)

    def mul(self, x: np.ndarray, y: int) -> np.ndarray:
        """``x * y`` elementwise for an array ``x`` and scalar ``y``."""
        x = np.asarray(x)
        if y == 0:
            return np.zeros_like(x)
        out = self.exp[(self.dlog[x] + self.dlog[y]) % (self.q - 1)]
        return np.where(x == 0, 0, out)

    def add(self, x, y):
        return self._digitwise(x, y, 1)

    def sub(self, x, y):
        return self._digitwise(x, y, -1)

    def _digitwise(self, x, y, sign):
        x, y = np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)
        if self.k == 1:
            return (x + sign * y) % self.p
        out = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
        mult = 1
        for _ in range(self.k):
            out += ((x % self.p + sign * (y % self.p)) % self.p) * mult
            x, y, mult = x // self.p, y // self.p, mult * self.p
        return out


def build_freeness_index(q: int) -> FreenessIndex:
    """Enumerate powers of a generator with schoolbook arithmetic."""
    pp = classify_prime_power(q)
    if pp is None or q < 3:
        raise ValueError(f"{q} is not a prime power >= 3")
    prof = factor_profile(q - 1)
    exp = np.empty(q - 1, dtype=np.int64)
    if pp.k == 1:
        g = least_primitive_root(q, prof)
        v = 1
        for j in range(q - 1):
            exp[j] = v
            v = v * g % q
    else:
        p, k = pp.p, pp.k
        low = find_primitive_modulus(p, k)[:-1]
        x = (0, 1) + (0,) * (k - 2)
        v = (1,) + (0,) * (k - 1)
        for j in range(q - 1):
            exp[j] = sum(c * p**i for i, c in enumerate(v))
            v = _polymulmod(v, x, low, p)
    dlog = np.full(q, -1, dtype=np.int64)
    dlog[exp] = np.arange(q - 1)
    if (dlog[1:] < 0).any():
        raise AssertionError(f"generator enumeration of F_{q} is not a bijection")
    return FreenessIndex(q, pp.p, pp.k, prof, exp, dlog)


def _rad_checked(fi: FreenessIndex, e: int) -> int:
    if e < 1 or (fi.q - 1) % e:
        raise ValueError(f"{e} does not divide q - 1 = {fi.q - 1}")
    return factor_profile(e).rad


def free_mask(fi: FreenessIndex, e: int) -> np.ndarray:
    """Boolean e-freeness of every field element (index = packed value)."""
    rad = _rad_checked(fi, e)
    mask = np.zeros(fi.q, dtype=bool)
    mask[1:] = np.gcd(fi.dlog[1:], rad) == 1
    return mask


def is_e_free(fi: FreenessIndex, x: int, e: int) -> bool:
    rad = _rad_checked(fi, e)
    if x == 0:
        return False
    return math.gcd(int(fi.dlog[x]), rad) == 1


def count_N(fi: FreenessIndex, a: int, c: int, e1: int, e2: int) -> int:
    """Number of ``g`` in ``F_q`` with ``g`` e1-free and ``a - c*g`` e2-free."""
    if a == 0 or c == 0:
        raise ValueError("a and c must be nonzero")
    g = np.arange(fi.q)
    gstar = fi.sub(a, fi.mul(g, c))
    return int((free_mask(fi, e1) & free_mask(fi, e2)[gstar]).sum())


def count_N_all_a(fi: FreenessIndex, c: int, e1: int, e2: int) -> np.ndarray:
    """``N(e1, e2)`` for every ``a`` at once (entry ``a``; entry 0 unused).

    Each pair ``(g, h)`` of an e1-free ``g`` and e2-free ``h`` is counted at
    ``a = h + c*g``.
    """
    cg = fi.mul(np.flatnonzero(free_mask(fi, e1)), c)
    h = np.flatnonzero(free_mask(fi, e2))
    sums = fi.add(h[None, :], cg[:, None])
    return np.bincount(sums.ravel(), minlength=fi.q)


def _ge_sqrt_exact(lhs: Fraction, beta: Fraction, q: int) -> bool:
    """Exact ``lhs >= beta * sqrt(q)``."""
    if beta <= 0:
        return lhs >= 0 or lhs * lhs <= beta * beta * q
    return lhs >= 0 and lhs * lhs >= beta * beta * q


def _ge_sqrt(lhs_num: np.ndarray, lhs_den: int, beta: Fraction, q: int) -> np.ndarray:
    """Elementwise ``lhs_num / lhs_den >= beta * sqrt(q)`` for integer ``lhs_num``.

    Double precision decides unless the margin is within ``TIE_MARGIN * q``;
    those entries are recomputed exactly.
    """
    val = lhs_num.astype(float) / lhs_den - float(beta) * math.sqrt(q)
    out = val >= 0
    for i in np.flatnonzero(np.abs(val) <= TIE_MARGIN * q):
        out[i] = _ge_sqrt_exact(Fraction(int(lhs_num[i]), lhs_den), beta, q)
    return out


class _NCache:
    """``N`` arrays over all ``a`` for one ``c``, keyed by radicals."""

    def __init__(self, fi: FreenessIndex, c: int):
        self.fi, self.c, self._memo = fi, c, {}

    def __call__(self, e1: int, e2: int) -> np.ndarray:
        key = (factor_profile(e1).rad, factor_profile(e2).rad)
        if key not in self._memo:
            self._memo[key] = count_N_all_a(self.fi, self.c, *key).astype(np.int64)
        return self._memo[key]


@dataclass(frozen=True)
class KernelData:
    """Quantities attached to a kernel ``e``: the sieved primes ``p_1..p_s``
    (primes of ``q - 1`` not dividing ``e``) and exact ``theta(e)``, ``W(e)``,
    ``delta``."""

    e: int
    rad: int
    sieved: tuple[int, ...]
    theta: Fraction
    w: int
    delta: Fraction

    @property
    def s(self) -> int:
        return len(self.sieved)


def kernel_data(fi: FreenessIndex, e: int) -> KernelData:
    _rad_checked(fi, e)
    ep = factor_profile(e)
    sieved = tuple(p for p in fi.profile.primes if e % p)
    delta = 1 - 2 * sum((Fraction(1, p) for p in sieved), Fraction(0))
    return KernelData(e, ep.rad, sieved, ep.theta, ep.w, delta)


def _a_slice(arr, a):
    return arr[1:] if a is None else arr[a:a + 1]


def _rational_offset(n: np.ndarray, alpha: Fraction) -> tuple[np.ndarray, int]:
    """``n - alpha`` as (integer numerators, common denominator)."""
    den = alpha.denominator
    return n * den - alpha.numerator, den


def lemma1_holds(fi: FreenessIndex, c: int, e: int, a: Optional[int] = None,
                 cache: Optional[_NCache] = None) -> np.ndarray:
    """Both forms of the combinatorial sieve inequality, per ``a``.

    Returns a boolean array over ``a = 1..q-1`` (or just the given ``a``).
    """
    kd = kernel_data(fi, e)
    if kd.s == 0:
        raise ValueError("kernel covers every prime of q - 1; the sieve is vacuous")
    N = cache or _NCache(fi, c)
    full = _a_slice(N(fi.q - 1, fi.q - 1), a)
    nee = _a_slice(N(e, e), a)
    left = [_a_slice(N(p * e, e), a) for p in kd.sieved]
    right = [_a_slice(N(e, p * e), a) for p in kd.sieved]
    ok3 = full >= sum(left) + sum(right) - (2 * kd.s - 1) * nee
    # rearranged with theta(p_i) = (p_i - 1)/p_i and delta, scaled by D = prod p_i
    D = math.prod(kd.sieved)
    rhs4 = sum(D * (l + r) - 2 * (D // p) * (p - 1) * nee
               for p, l, r in zip(kd.sieved, left, right))
    rhs4 = rhs4 + int(D * kd.delta) * nee
    ok4 = D * full >= rhs4
    return ok3 & ok4


def check_lemma1(fi: FreenessIndex, a: int, c: int, e: int) -> bool:
    return bool(lemma1_holds(fi, c, e, a)[0])


def lemma2_holds(fi: FreenessIndex, c: int, e: int, l: int, a: Optional[int] = None,
                 cache: Optional[_NCache] = None) -> np.ndarray:
    """The three bounds on ``N(e,e)``, ``N(le,e)`` and ``N(e,le)`` per ``a``.

    Stated for ``q >= 4`` only: at ``q = 3``, ``e = 1`` the first bound would
    read ``1 >= 3 - sqrt(3)``.
    """
    if fi.q < 4:
        raise ValueError("the bounds on N(e, e) assume q >= 4")
    kd = kernel_data(fi, e)
    if e % l == 0 or (fi.q - 1) % l:
        raise ValueError(f"l={l} must divide q - 1 and not divide e={e}")
    N = cache or _NCache(fi, c)
    q = fi.q
    th2w2 = kd.theta**2 * kd.w**2
    nee = _a_slice(N(e, e), a)
    # N(e,e) - theta^2 q >= -theta^2 W^2 sqrt(q)
    ok = _ge_sqrt(*_rational_offset(nee, kd.theta**2 * q), -th2w2, q)
    bound = (1 - Fraction(1, l)) * th2w2
    for other in (_a_slice(N(l * e, e), a), _a_slice(N(e, l * e), a)):
        # l * (N' - theta(l) N(e,e)), two-sided
        num = l * other - (l - 1) * nee
        ok &= _ge_sqrt(num, l, -bound, q)
        ok &= _ge_sqrt(-num, l, -bound, q)
    return ok


def check_lemma2(fi: FreenessIndex, a: int, c: int, e: int, l: int) -> bool:
    return bool(lemma2_holds(fi, c, e, l, a)[0])


def theorem_bound_holds(fi: FreenessIndex, c: int, e: int, a: Optional[int] = None,
                        cache: Optional[_NCache] = None) -> np.ndarray:
    """``N(q-1,q-1) >= delta theta^2 sqrt(q) (sqrt(q) - W^2 - ((2s-1)/delta + 1) W^2)``."""
    kd = kernel_data(fi, e)
    if kd.delta <= 0:
        raise ValueError(f"delta = {kd.delta} is not positive for e = {e}")
    N = cache or _NCache(fi, c)
    q = fi.q
    full = _a_slice(N(q - 1, q - 1), a)
    # expanded: delta theta^2 q - theta^2 W^2 (2 delta + 2s - 1) sqrt(q)
    alpha = kd.delta * kd.theta**2 * q
    beta = -kd.theta**2 * kd.w**2 * (2 * kd.delta + 2 * kd.s - 1)
    return _ge_sqrt(*_rational_offset(full, alpha), beta, q)


def check_theorem_bound(fi: FreenessIndex, a: int, c: int, e: int) -> bool:
    return bool(theorem_bound_holds(fi, c, e, a)[0])


def theorem_bracket(fi: FreenessIndex, e: int) -> float:
    """``sqrt(q) - W^2 - ((2s-1)/delta + 1) W^2``; positive iff ``q`` beats the sieve bound."""
    kd = kernel_data(fi, e)
    if kd.delta <= 0:
        raise ValueError(f"delta = {kd.delta} is not positive for e = {e}")
    return math.sqrt(fi.q) - kd.w**2 - float((2 * kd.s - 1) / kd.delta + 1) * kd.w**2


@dataclass
class InequalityTally:
    q: int
    checks: int = 0
    violations: int = 0
    first_violation: Optional[tuple] = None

    def add(self, name: str, ok: np.ndarray, **where) -> None:
        self.checks += int(ok.size)
        bad = int(ok.size - np.count_nonzero(ok))
        if bad and self.first_violation is None:
            a = int(np.flatnonzero(~ok)[0]) + 1
            self.first_violation = (name, a, where)
        self.violations += bad


def check_all_inequalities(q: int, c_values: Optional[Iterable[int]] = None) -> InequalityTally:
    """Every valid ``(a, c, e, l)`` for one field, kernels taken up to radical.

    ``c_values`` restricts ``c``; by default all nonzero ``c`` are used.
    """
    fi = build_freeness_index(q)
    primes = fi.profile.primes
    kernels = [math.prod(sub) for sub in _subsets(primes)]
    tally = InequalityTally(q)
    for c in (range(1, q) if c_values is None else c_values):
        cache = _NCache(fi, c)
        for e in kernels:
            kd = kernel_data(fi, e)
            if kd.s:
                tally.add("lemma1", lemma1_holds(fi, c, e, cache=cache), c=c, e=e)
            for l in (kd.sieved if q >= 4 else ()):
                tally.add("lemma2", lemma2_holds(fi, c, e, l, cache=cache), c=c, e=e, l=l)
            if kd.delta > 0:
                tally.add("theorem", theorem_bound_holds(fi, c, e, cache=cache), c=c, e=e)
    return tally


def _subsets(primes: Iterable[int]):
    out = [()]
    for p in primes:
        out += [s + (p,) for s in out]
    return out


def min_N_full(fi: FreenessIndex) -> tuple[int, int, int]:
    """``min N(q-1, q-1)`` over all ``(a, c)`` with the minimizing pair."""
    best = None
    for c in range(1, fi.q):
        arr = count_N_all_a(fi, c, fi.q - 1, fi.q - 1)[1:]
        a = int(np.argmin(arr))
        if best is None or arr[a] < best[0]:
            best = (int(arr[a]), a + 1, c)
    return best


def in_G_bruteforce(q: int, fi: Optional[FreenessIndex] = None) -> tuple[bool, Optional[tuple[int, int]]]:
    """Decide membership by searching, for every ``(a, c)``, a primitive ``g``
    with ``a - c*g`` primitive. Returns the first failing ``(a, c)`` if any."""
    fi = fi or build_freeness_index(q)
    a, c = K.first_failure(fi.primitive_by_log, fi.exp, fi.dlog, fi.p, fi.k)
    if c == 0:
        return True, None
    return False, (int(a), int(c))


def brute_force_exceptions(q_max: int) -> list[int]:
    """Prime powers ``3 <= q <= q_max`` outside the set."""
    if q_max < 3:
        raise ValueError("q_max must be at least 3")
    return [q for q, _, _ in prime_powers_in(3, q_max) if not in_G_bruteforce(q)[0]]
