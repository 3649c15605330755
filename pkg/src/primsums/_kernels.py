"""Compiled inner loops.

Field elements are packed integers: ``sum(a_i * p**i)`` for the coefficient
vector of ``F_{p^k}``, which for ``k == 1`` is the residue itself. Addition
and subtraction act digit-wise; multiplication always goes through the
``exp``/``log`` tables of the context so the same kernels serve both
prime and extension fields.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Return codes of run_c: which state holds the residual on failure.
STATE_MARK = 0
STATE_REMAIN = 1

MODE_ALG1 = 0
MODE_ALG2 = 1
MODE_HYBRID = 2


@njit(cache=True, inline="always")
def fadd(a, b, p, k):
    if k == 1:
        s = a + b
        return s - p * (s >= p)
    if p == 2:
        return a ^ b
    r = 0
    mult = 1
    for _ in range(k):
        s = a % p + b % p
        if s >= p:
            s -= p
        r += s * mult
        mult *= p
        a //= p
        b //= p
    return r


@njit(cache=True, inline="always")
def fsub(a, b, p, k):
    if k == 1:
        s = a - b
        return s + p * (s < 0)
    if p == 2:
        return a ^ b
    r = 0
    mult = 1
    for _ in range(k):
        s = a % p - b % p
        if s < 0:
            s += p
        r += s * mult
        mult *= p
        a //= p
        b //= p
    return r


@njit(cache=True)
def ext_power_table(p, k, mod_low):
    """Packed ``x**j`` for ``j = 0..q-2`` modulo ``x**k + sum(mod_low[i] x**i)``."""
    q = p**k
    out = np.empty(q - 1, dtype=np.int64)
    digits = np.zeros(k, dtype=np.int64)
    digits[0] = 1
    for j in range(q - 1):
        v = 0
        for i in range(k - 1, -1, -1):
            v = v * p + digits[i]
        out[j] = v
        # multiply by x: shift up, fold x**k = -sum(mod_low[i] x**i)
        t = digits[k - 1]
        for i in range(k - 1, 0, -1):
            digits[i] = digits[i - 1]
        digits[0] = 0
        if t != 0:
            for i in range(k):
                digits[i] = (digits[i] - t * mod_low[i]) % p
    return out


@njit(cache=True)
def zech_table(exp, log, p, k):
    """``Z[n] = log(1 + x**n)``, with -1 where ``1 + x**n = 0``."""
    qm1 = exp.shape[0]
    z = np.empty(qm1, dtype=np.int64)
    for n in range(qm1):
        s = fadd(1, exp[n], p, k)
        z[n] = -1 if s == 0 else log[s]
    return z


@njit(cache=True, inline="always")
def _zech_log(x_log, y_log, zech):
    """Log of ``x**x_log + x**y_log``, or -1 if the sum is zero."""
    qm1 = zech.shape[0]
    idx = x_log - y_log
    idx += qm1 * (idx < 0)
    z = zech[idx]
    if z < 0:
        return -1
    s = y_log + z
    return s - qm1 * (s >= qm1)


@njit(cache=True, inline="always")
def _mark_row(t, r, prims, prim_exps, d, d_log, exp, p, k, zech):
    if zech.shape[0] > 0:
        for n in range(prims.shape[0]):
            s = _zech_log(prim_exps[n], d_log, zech)
            a = 0 if s < 0 else exp[s]
            r -= 1 - t[a]
            t[a] = 1
    else:
        for n in range(prims.shape[0]):
            a = fadd(prims[n], d, p, k)
            # branch-free: the hit pattern is random
            r -= 1 - t[a]
            t[a] = 1
    return r


@njit(cache=True)
def mark_rows(t, r, prims, exp, log_c, prim_exps, m_start, m_stop, p, k, switch_below, zech):
    """Algorithm-1 rows ``m_start..m_stop-1`` for ``d = c * g_m``.

    Returns ``(r, m_next)``; stops early after the row where ``r`` hits 0 or
    drops below ``switch_below``. A non-empty ``zech`` table (see
    :func:`zech_table`) replaces digitwise addition.
    """
    qm1 = exp.shape[0]
    m = m_start
    while m < m_stop:
        d_log = (log_c + prim_exps[m]) % qm1
        r = _mark_row(t, r, prims, prim_exps, exp[d_log], d_log, exp, p, k, zech)
        m += 1
        if r == 0 or r < switch_below:
            break
    return r, m


@njit(cache=True)
def mark_values(t, r, prims, ds, p, k, exp, log, prim_exps, zech):
    """Mark ``g_n + d`` for each ``d`` of ``ds`` in order; stop once ``r == 0``.

    Returns ``(r, number of d processed)``.
    """
    used = 0
    for idx in range(ds.shape[0]):
        d = ds[idx]
        r = _mark_row(t, r, prims, prim_exps, d, log[d], exp, p, k, zech)
        used += 1
        if r == 0:
            break
    return r, used


@njit(cache=True)
def remain_rows(rem, r, primitive, exp, log_c, prim_exps, m_start, m_stop, p, k,
                log, zech, prim_by_log):
    """Algorithm-2 rows; ``rem[:r]`` holds the unresolved values. Returns ``(r, m_next)``.

    With a Zech table, ``a - d`` is formed as ``a + (-d)`` where
    ``-d = d * x**((q-1)/2)`` (odd characteristic).
    """
    qm1 = exp.shape[0]
    use_zech = zech.shape[0] > 0
    half = qm1 // 2
    m = m_start
    while m < m_stop:
        d_log = (log_c + prim_exps[m]) % qm1
        d = exp[d_log]
        nd_log = (d_log + half) % qm1
        i = 0
        while i < r:
            if use_zech:
                s = _zech_log(log[rem[i]], nd_log, zech)
                hit = s >= 0 and prim_by_log[s] != 0
            else:
                hit = primitive[fsub(rem[i], d, p, k)] != 0
            if hit:
                r -= 1
                rem[i] = rem[r]
            else:
                i += 1
        m += 1
        if r == 0:
            break
    return r, m


@njit(cache=True)
def collect_clear(t, rem):
    """Write the clear indices of ``t`` (ascending) into ``rem``; return their count."""
    r = 0
    for a in range(t.shape[0]):
        if t[a] == 0:
            rem[r] = a
            r += 1
    return r


@njit(cache=True)
def run_c(t, rem, r0, prims, primitive, exp, log_c, prim_exps, p, k, mode, switch_below,
          log, zech, prim_by_log):
    """Verify one ``c`` starting from mark table ``t`` with ``r0`` clear entries.

    ``t`` must already hold the starting marks (``t[0] = 1``). Returns
    ``(success, m_terminal, r, state)`` where ``m_terminal`` is 1-based and
    ``state`` tells whether the residual lives in ``t`` or in ``rem[:r]``.
    """
    nm = prim_exps.shape[0]
    r = r0
    if r == 0:
        return True, 0, 0, STATE_MARK
    if mode == MODE_ALG2:
        r = collect_clear(t, rem)
        r, m = remain_rows(rem, r, primitive, exp, log_c, prim_exps, 0, nm, p, k,
                           log, zech, prim_by_log)
        return r == 0, m if r == 0 else 0, r, STATE_REMAIN
    thr = switch_below if mode == MODE_HYBRID else -1
    r, m = mark_rows(t, r, prims, exp, log_c, prim_exps, 0, nm, p, k, thr, zech)
    if r == 0:
        return True, m, 0, STATE_MARK
    if m == nm:
        return False, 0, r, STATE_MARK
    n_clear = collect_clear(t, rem)
    r, m = remain_rows(rem, n_clear, primitive, exp, log_c, prim_exps, m, nm, p, k,
                       log, zech, prim_by_log)
    return r == 0, m if r == 0 else 0, r, STATE_REMAIN


@njit(cache=True)
def has_representation(a, c_log, primitive_by_log, exp, log, p, k):
    """Is ``a = h + c*g`` for primitive ``g, h``? Scans ``g`` by exponent."""
    qm1 = exp.shape[0]
    for j in range(qm1):
        if not primitive_by_log[j]:
            continue
        cg = exp[(c_log + j) % qm1]
        h = fsub(a, cg, p, k)
        if h != 0 and primitive_by_log[log[h]]:
            return True
    return False


@njit(cache=True)
def first_failure(primitive_by_log, exp, log, p, k):
    """First ``(a, c)`` (ascending ``c`` then ``a``) with no representation, or ``(0, 0)``."""
    q = exp.shape[0] + 1
    for c in range(1, q):
        c_log = log[c]
        for a in range(1, q):
            if not has_representation(a, c_log, primitive_by_log, exp, log, p, k):
                return a, c
    return 0, 0
