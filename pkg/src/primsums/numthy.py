"""Integer arithmetic shared by the rest of the package.

Factorization (trial division, Pollard-Brent for large cofactors), the multiplicative quantities used by the
sieve bounds (phi, omega, W, Rad, theta), prime-power classification and
enumeration of prime powers in an interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional

import numpy as np

# sqrt(1.5e7) ~ 3873; covers the whole sieve workload with one table
_SMALL_LIMIT = 3873
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MAX_N = 2**63 - 1


def primes_upto(n: int) -> np.ndarray:
    """Return all primes ``<= n`` as an ascending int64 array (Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for i in range(3, math.isqrt(n) + 1, 2):
        if is_p[i]:
            is_p[i * i :: 2 * i] = False
    return np.flatnonzero(is_p).astype(np.int64)


_SMALL_PRIMES: tuple[int, ...] = tuple(int(x) for x in primes_upto(_SMALL_LIMIT))


def is_prime(n: int) -> bool:
    """Deterministic primality test, exact for every ``n < 3.3e24``."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES[:13]:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FactorProfile:
    """Factorization of ``n`` together with its derived multiplicative data.

    Attributes
    ----------
    n : int
    factors : tuple of (prime, exponent)
        Primes strictly ascending.
    phi, omega, w, rad : int
        Euler totient, number of distinct primes, ``2**omega`` (number of
        square-free divisors) and the radical.
    theta : Fraction
        ``prod(1 - 1/p)`` over the distinct primes, so ``phi == n * theta``.
    """

    n: int
    factors: tuple[tuple[int, int], ...]
    phi: int = field(init=False)
    omega: int = field(init=False)
    w: int = field(init=False)
    rad: int = field(init=False)
    theta: Fraction = field(init=False)

    def __post_init__(self) -> None:
        rad = math.prod(p for p, _ in self.factors)
        phi = math.prod((p - 1) * p ** (k - 1) for p, k in self.factors)
        theta = Fraction(1)
        for p, _ in self.factors:
            theta *= Fraction(p - 1, p)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "omega", len(self.factors))
        object.__setattr__(self, "w", 2 ** len(self.factors))
        object.__setattr__(self, "rad", rad)
        object.__setattr__(self, "theta", theta)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def _pollard_brent(n: int) -> int:
    """A nontrivial factor of the odd composite ``n``."""
    for c in range(1, n):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"no factor found for {n}")


def _split_large(m: int, out: dict[int, int]) -> None:
    if is_prime(m):
        out[m] = out.get(m, 0) + 1
        return
    r = math.isqrt(m)
    d = r if r * r == m else _pollard_brent(m)
    _split_large(d, out)
    _split_large(m // d, out)


def factor_profile(n: int) -> FactorProfile:
    """Factor ``n`` and return its :class:`FactorProfile`. and return its :class:`FactorProfile`.

    Raises
    ------
    ValueError
        If ``n`` is outside ``[1, 2**63 - 1]``.
    """
    if not isinstance(n, (int, np.integer)) or n < 1 or n > _MAX_N:
        raise ValueError(f"factor_profile needs 1 <= n < 2**63, got {n!r}")
    n = int(n)
    m = n
    factors = []
    for p in _SMALL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            factors.append((p, k))
    if m > 1:
        if m > _SMALL_LIMIT**2 and not is_prime(m):
            # only reached for n beyond the intended workload
            big: dict[int, int] = {}
            _split_large(m, big)
            factors += sorted(big.items())
        else:
            factors.append((m, 1))
    return FactorProfile(n, tuple(factors))


class PrimePowerId(NamedTuple):
    q: int
    p: int
    k: int


def integer_root(n: int, k: int) -> int:
    """Largest ``r`` with ``r**k <= n``."""
    if k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    r = int(round(n ** (1.0 / k)))
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def classify_prime_power(n: int) -> Optional[PrimePowerId]:
    """Return ``(n, p, k)`` if ``n == p**k`` for a prime ``p``, else ``None``."""
    if n < 2:
        raise ValueError(f"classify_prime_power needs n >= 2, got {n}")
    for k in range(1, n.bit_length() + 1):
        r = integer_root(n, k)
        if r < 2:
            break
        if r**k == n and is_prime(r):
            return PrimePowerId(n, r, k)
    return None


def prime_powers_in(lo: int, hi: int) -> Iterator[PrimePowerId]:
    """Yield every prime power in ``[lo, hi]`` in ascending order."""
    lo = max(lo, 2)
    if lo > hi:
        return
    primes = primes_upto(hi)
    items = [(int(p), int(p), 1) for p in primes[primes >= lo]]
    for p in primes[: np.searchsorted(primes, math.isqrt(hi), side="right")]:
        p = int(p)
        q, k = p * p, 2
        while q <= hi:
            if q >= lo:
                items.append((q, p, k))
            q *= p
            k += 1
    items.sort()
    for q, p, k in items:
        yield PrimePowerId(q, p, k)


def omega_table(n: int) -> np.ndarray:
    """``omega(i)`` for ``i = 0..n`` as a uint8 array (``omega(0) = 0``)."""
    om = np.zeros(n + 1, dtype=np.uint8)
    for p in primes_upto(n):
        om[p::p] += 1
    om[0] = 0
    return om


def square_free_divisors(primes) -> list[int]:
    """All products of subsets of ``primes``, ascending."""
    divs = [1]
    for p in primes:
        divs += [d * p for d in divs]
    return sorted(divs)
