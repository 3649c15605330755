"""Extension fields ``F_{p^k}`` with ``x`` as the fixed primitive root.

An element is a coefficient vector ``(a_0, ..., a_{k-1})`` meaning
``a_0 + a_1 x + ... + a_{k-1} x**(k-1)``; its packed index is the value of
that polynomial at ``x = p``. The modulus is the first monic polynomial of
degree ``k`` (ordered by the packed value of its low coefficients) in which
``x`` has multiplicative order ``q - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .gfp import build_prime_ctx, coprime_exponents
from .numthy import FactorProfile, classify_prime_power, factor_profile, is_prime

PolyElem = tuple  # tuple[int, ...] of length k


def pack(coeffs, p: int) -> int:
    """Packed index of a coefficient vector (lowest degree first)."""
    out = 0
    for c in reversed(coeffs):
        if not 0 <= c < p:
            raise ValueError(f"coefficient {c} outside [0, {p})")
        out = out * p + int(c)
    return out


def unpack(a: int, p: int, k: int) -> PolyElem:
    if not 0 <= a < p**k:
        raise ValueError(f"packed index {a} outside [0, {p}**{k})")
    out = []
    for _ in range(k):
        a, r = divmod(a, p)
        out.append(r)
    return tuple(out)


def _polymulmod(a, b, mod_low, p):
    """``a * b`` reduced modulo ``x**k + sum(mod_low[i] x**i)`` over ``F_p``."""
    k = len(mod_low)
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    for deg in range(2 * k - 2, k - 1, -1):
        t = prod[deg] % p
        if t:
            # x**deg = x**(deg-k) * x**k = -x**(deg-k) * sum(mod_low[i] x**i)
            for i in range(k):
                prod[deg - k + i] -= t * mod_low[i]
    return tuple(c % p for c in prod[:k])


def _polypow(a, n, mod_low, p):
    k = len(mod_low)
    result = (1,) + (0,) * (k - 1)
    base = a
    while n:
        if n & 1:
            result = _polymulmod(result, base, mod_low, p)
        base = _polymulmod(base, base, mod_low, p)
        n >>= 1
    return result


def x_has_full_order(mod_low, p: int, k: int, profile: FactorProfile) -> bool:
    """``x**(q-1) == 1`` and ``x**((q-1)/l) != 1`` for every prime ``l | q-1``."""
    q = p**k
    one = (1,) + (0,) * (k - 1)
    x = (0, 1) + (0,) * (k - 2)
    if _polypow(x, q - 1, mod_low, p) != one:
        return False
    return all(_polypow(x, (q - 1) // ell, mod_low, p) != one for ell in profile.primes)


def find_primitive_modulus(p: int, k: int) -> tuple[int, ...]:
    """Monic degree-``k`` modulus with ``x`` primitive, as all ``k + 1`` coefficients.

    Returned lowest degree first; the trailing entry is the leading 1.
    """
    if not is_prime(p) or k < 2:
        raise ValueError(f"need prime p and k >= 2, got p={p}, k={k}")
    profile = factor_profile(p**k - 1)
    for code in range(p**k):
        low = unpack(code, p, k)
        if low[0] == 0:
            continue  # x would divide the modulus
        if x_has_full_order(low, p, k, profile):
            return low + (1,)
    raise AssertionError(f"no primitive modulus of degree {k} over F_{p}")


@dataclass(frozen=True, eq=False)
class ExtFieldCtx:
    """Immutable ``F_{p^k}`` context; same table layout as the prime-field one.

    ``exp[j]`` is the packed value of ``x**j``, ``log`` its inverse,
    ``primitive`` is indexed by packed value. ``zech[n] = log(1 + x**n)``
    (-1 where the sum vanishes) turns addition into table lookups; it is
    left empty in characteristic 2, where addition is a plain XOR.
    """

    p: int
    k: int
    modulus: tuple[int, ...]
    qm1_profile: FactorProfile
    exp: np.ndarray
    log: np.ndarray
    primitive: np.ndarray
    prim_exps: np.ndarray
    zech: np.ndarray

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def g(self) -> int:
        return pack((0, 1) + (0,) * (self.k - 2), self.p)

    @property
    def phi_qm1(self) -> int:
        return self.qm1_profile.phi

    @property
    def prim_values(self) -> np.ndarray:
        return self.exp[self.prim_exps]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.q - 1)])

    def add(self, a: int, b: int) -> int:
        return int(_kernels.fadd(a, b, self.p, self.k))

    def sub(self, a: int, b: int) -> int:
        return int(_kernels.fsub(a, b, self.p, self.k))

    def power(self, a: int, n: int) -> int:
        if a == 0:
            return 0 if n else 1
        return int(self.exp[(self.log[a] * n) % (self.q - 1)])

    def elements(self) -> range:
        return range(self.q)


def field_add(a: PolyElem, b: PolyElem, ctx: ExtFieldCtx) -> PolyElem:
    return tuple((x + y) % ctx.p for x, y in zip(a, b))


def field_sub(a: PolyElem, b: PolyElem, ctx: ExtFieldCtx) -> PolyElem:
    return tuple((x - y) % ctx.p for x, y in zip(a, b))


def field_mul(a: PolyElem, b: PolyElem, ctx: ExtFieldCtx) -> PolyElem:
    """Schoolbook product reduced by the context modulus (independent of the tables)."""
    return _polymulmod(a, b, ctx.modulus[:-1], ctx.p)


def build_ext_ctx(p: int, k: int) -> ExtFieldCtx:
    modulus = find_primitive_modulus(p, k)
    q = p**k
    prof = factor_profile(q - 1)
    exp = _kernels.ext_power_table(p, k, np.array(modulus[:-1], dtype=np.int64))
    log = np.full(q, -1, dtype=np.int64)
    log[exp] = np.arange(q - 1)
    if (log[1:] < 0).any():
        raise AssertionError("x does not generate the unit group")
    prim_exps = coprime_exponents(q - 1, prof)
    primitive = np.zeros(q, dtype=np.uint8)
    primitive[exp[prim_exps]] = 1
    if p == 2:
        zech = np.zeros(0, dtype=np.int64)
    else:
        zech = _kernels.zech_table(exp, log, p, k)
    for arr in (exp, log, primitive, prim_exps, zech):
        arr.setflags(write=False)
    return ExtFieldCtx(p, k, modulus, prof, exp, log, primitive, prim_exps, zech)


def build_field_ctx(q: int):
    """Prime or extension context for the prime power ``q``."""
    pp = classify_prime_power(q) if q >= 2 else None
    if pp is None:
        raise ValueError(f"{q} is not a prime power")
    if pp.k == 1:
        return build_prime_ctx(q)
    return build_ext_ctx(pp.p, pp.k)
