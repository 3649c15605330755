"""Prime field contexts: least primitive root, primitivity table, cosets.

Field elements are plain integers ``0..p-1``. Every context also carries
the power table ``exp[j] = g**j`` and its inverse ``log`` because the
verification kernels address primitive roots by exponent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .numthy import FactorProfile, factor_profile, is_prime


@dataclass(frozen=True, eq=False)
class PrimeFieldCtx:
    """Immutable prime field context.

    ``exp[j] = g**j mod p`` for ``j = 0..p-2``; ``log`` inverts it on nonzero
    values (``log[0]`` is -1); ``primitive[x]`` is 1 iff ``x`` generates the
    multiplicative group; ``prim_exps`` lists the exponents coprime to
    ``p - 1`` in ascending order, which fixes the order of the primitive
    roots used by the algorithms.
    """

    p: int
    g: int
    pm1_profile: FactorProfile
    exp: np.ndarray
    log: np.ndarray
    primitive: np.ndarray
    prim_exps: np.ndarray

    q = property(lambda self: self.p)
    k = property(lambda self: 1)
    qm1_profile = property(lambda self: self.pm1_profile)

    @property
    def phi_pm1(self) -> int:
        return self.pm1_profile.phi

    phi_qm1 = phi_pm1

    @property
    def prim_values(self) -> np.ndarray:
        return self.exp[self.prim_exps]

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def power(self, a: int, n: int) -> int:
        return pow(a, n, self.p)

    def elements(self) -> range:
        return range(self.p)


def is_primitive_root(g: int, p: int, profile: Optional[FactorProfile] = None) -> bool:
    profile = profile or factor_profile(p - 1)
    if g % p == 0:
        return False
    return all(pow(g, (p - 1) // ell, p) != 1 for ell in profile.primes)


def least_primitive_root(p: int, profile: Optional[FactorProfile] = None) -> int:
    profile = profile or factor_profile(p - 1)
    for g in range(1, p):
        if is_primitive_root(g, p, profile):
            return g
    raise AssertionError(f"no primitive root found for {p}")


def coprime_exponents(n: int, profile: FactorProfile) -> np.ndarray:
    """Ascending ``j`` in ``[0, n)`` with ``gcd(j, n) = 1``."""
    mask = np.ones(n, dtype=bool)
    for ell in profile.primes:
        mask[::ell] = False
    if n == 1:
        mask[0] = True
    return np.flatnonzero(mask).astype(np.int64)


def power_table(g: int, p: int) -> np.ndarray:
    """``g**j mod p`` for ``j = 0..p-2``, built in doubling blocks."""
    n = p - 1
    out = np.empty(n, dtype=np.int64)
    out[0] = 1
    filled = 1
    while filled < n:
        step = min(filled, n - filled)
        # g**(filled + i) = g**filled * g**i
        out[filled:filled + step] = out[:step] * pow(g, filled, p) % p
        filled += step
    return out


def build_prime_ctx(p: int) -> PrimeFieldCtx:
    """Build the context for ``F_p``; raises ``ValueError`` unless ``p`` is an odd prime."""
    if p < 3 or not is_prime(p):
        raise ValueError(f"build_prime_ctx needs an odd prime, got {p}")
    prof = factor_profile(p - 1)
    g = least_primitive_root(p, prof)
    exp = power_table(g, p)
    log = np.full(p, -1, dtype=np.int64)
    log[exp] = np.arange(p - 1)
    prim_exps = coprime_exponents(p - 1, prof)
    primitive = np.zeros(p, dtype=np.uint8)
    primitive[exp[prim_exps]] = 1
    for arr in (exp, log, primitive, prim_exps):
        arr.setflags(write=False)
    return PrimeFieldCtx(p, g, prof, exp, log, primitive, prim_exps)


@dataclass(frozen=True)
class CosetStructure:
    """``u`` is the largest prime dividing ``p - 1`` exactly once, ``v = (p-1)/u``.

    The coset ``C_o`` consists of ``g**(o + i*v)`` for ``i = 0..u-1``;
    ``G = C_1`` holds one non-primitive element ``z = g**(1 + i0*v)``.
    """

    u: int
    v: int
    z: int
    i0: int


def coset_structure(ctx) -> Optional[CosetStructure]:
    """Coset data for ``ctx``, or ``None`` when every prime of ``q - 1`` is repeated.

    Works with any context exposing ``exp`` and ``qm1_profile``.
    """
    unitary = [p for p, k in ctx.qm1_profile.factors if k == 1]
    if not unitary:
        return None
    u = max(unitary)
    v = (ctx.q - 1) // u
    # 1 + i*v == 0 (mod u)
    i0 = (-pow(v, -1, u)) % u
    z = int(ctx.exp[(1 + i0 * v) % (ctx.q - 1)])
    return CosetStructure(u, v, z, i0)


def coset_exponents(cs: CosetStructure, o: int) -> np.ndarray:
    if not 0 <= o < cs.v:
        raise ValueError(f"coset index {o} outside 0..{cs.v - 1}")
    return o + cs.v * np.arange(cs.u, dtype=np.int64)


def coset_members(cs: CosetStructure, ctx, o: int) -> np.ndarray:
    """Members of ``C_o`` in ascending ``i`` order."""
    return ctx.exp[coset_exponents(cs, o)]

