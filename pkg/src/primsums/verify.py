"""Verification engine: for every nonzero ``c``, is every nonzero ``a`` of the
form ``g_n + c*g_m`` with ``g_n, g_m`` primitive?

Four strategies share the compiled kernels in :mod:`._kernels`:

``alg1``
    Mark table: for ``m = 1, 2, ...`` mark every ``g_n + c*g_m``; success
    once nothing is left unmarked.
``alg2``
    Remaining list: drop ``a`` from the list when ``a - c*g_m`` is
    primitive.
``hybrid``
    ``alg1`` until fewer than ``0.25 * phi(q-1)`` values remain (checked
    after each ``m``), then ``alg2`` on the leftovers.
``alg3-auto``
    Coset sharing (prime fields): many ``c`` are processed against one
    mark table; falls back to ``hybrid`` when no coset structure exists or
    for extension fields.

Primitive roots are always taken in ascending exponent order ``g**j``
with ``gcd(j, q-1) = 1``, so terminating indices are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels as K
from .gfp import CosetStructure, coset_exponents, coset_structure
from .gfq import build_field_ctx
from .numthy import factor_profile

STRATEGIES = ("alg1", "alg2", "hybrid", "alg3-auto")
_MODES = {"alg1": K.MODE_ALG1, "alg2": K.MODE_ALG2, "hybrid": K.MODE_HYBRID}
SWITCH_FRACTION = 0.25


@dataclass
class MarkState:
    """Mark table ``t`` (``t[a] == 1`` once ``a`` is known representable) and
    the number ``r`` of clear entries."""

    t: np.ndarray
    r: int

    @classmethod
    def fresh(cls, q: int) -> "MarkState":
        t = np.zeros(q, dtype=np.uint8)
        t[0] = 1
        return cls(t, q - 1)

    def copy(self) -> "MarkState":
        return MarkState(self.t.copy(), self.r)

    def unresolved(self) -> np.ndarray:
        return np.flatnonzero(self.t == 0)


@dataclass
class RemainState:
    remaining: np.ndarray
    r: int

    @classmethod
    def fresh(cls, q: int) -> "RemainState":
        return cls(np.arange(1, q, dtype=np.int64), q - 1)

    @classmethod
    def from_marks(cls, state: MarkState) -> "RemainState":
        rem = np.empty(len(state.t), dtype=np.int64)
        r = K.collect_clear(state.t, rem)
        return cls(rem[:r].copy(), r)

    def unresolved(self) -> np.ndarray:
        return np.sort(self.remaining[: self.r])


@dataclass(frozen=True)
class COutcome:
    """Result for one ``c``. ``m_terminal`` is 0 on failure; ``unresolved``
    lists the values of ``a`` left without a representation."""

    c: int
    success: bool
    m_terminal: int
    residual: int
    unresolved: tuple[int, ...] = ()


def _switch_below(ctx, strategy: str) -> float:
    return SWITCH_FRACTION * ctx.qm1_profile.phi if strategy == "hybrid" else -1.0


class _Scratch:
    """Reusable per-field buffers; not shared between threads."""

    _NO_ZECH = np.zeros(0, dtype=np.int64)

    def __init__(self, ctx):
        self.ctx = ctx
        self.prims = np.ascontiguousarray(ctx.prim_values)
        self.zech = getattr(ctx, "zech", self._NO_ZECH)
        self.prim_by_log = np.ascontiguousarray(ctx.primitive[ctx.exp])
        self.t = np.empty(ctx.q, dtype=np.uint8)
        self.rem = np.empty(ctx.q, dtype=np.int64)

    def reset(self) -> None:
        self.t.fill(0)
        self.t[0] = 1


def _run(ctx, c: int, t: np.ndarray, r0: int, strategy: str, scratch: _Scratch) -> COutcome:
    if c <= 0 or c >= ctx.q:
        raise ValueError(f"c must be a nonzero field element, got {c}")
    ok, m, r, where = K.run_c(t, scratch.rem, r0, scratch.prims, ctx.primitive, ctx.exp,
                              int(ctx.log[c]), ctx.prim_exps, ctx.p, ctx.k,
                              _MODES[strategy], _switch_below(ctx, strategy),
                              ctx.log, scratch.zech, scratch.prim_by_log)
    if ok:
        return COutcome(c, True, int(m), 0)
    if where == K.STATE_MARK:
        left = np.flatnonzero(t == 0)
    else:
        left = np.sort(scratch.rem[:r])
    return COutcome(c, False, 0, int(r), tuple(int(a) for a in left))


def verify_c_alg1(ctx, c: int, state: Optional[MarkState] = None) -> tuple[COutcome, MarkState]:
    """Algorithm 1 for one ``c``. A supplied ``state`` is resumed and updated in place."""
    state = state if state is not None else MarkState.fresh(ctx.q)
    scratch = _Scratch(ctx)
    out = _run(ctx, c, state.t, state.r, "alg1", scratch)
    state.r = out.residual
    return out, state


def verify_c_alg2(ctx, c: int, state: Optional[RemainState] = None) -> COutcome:
    """Algorithm 2 for one ``c``, optionally resuming a remaining list."""
    if state is None:
        return _run(ctx, c, _fresh_t(ctx.q), ctx.q - 1, "alg2", _Scratch(ctx))
    rem = np.empty(ctx.q, dtype=np.int64)
    rem[: state.r] = state.remaining[: state.r]
    scratch = _Scratch(ctx)
    r, m = K.remain_rows(rem, state.r, ctx.primitive, ctx.exp, int(ctx.log[c]),
                         ctx.prim_exps, 0, len(ctx.prim_exps), ctx.p, ctx.k,
                         ctx.log, scratch.zech, scratch.prim_by_log)
    if r == 0:
        return COutcome(c, True, int(m), 0)
    return COutcome(c, False, 0, int(r), tuple(int(a) for a in np.sort(rem[:r])))


def verify_c_hybrid(ctx, c: int, state: Optional[MarkState] = None) -> COutcome:
    state = state.copy() if state is not None else MarkState.fresh(ctx.q)
    return _run(ctx, c, state.t, state.r, "hybrid", _Scratch(ctx))


def _fresh_t(q: int) -> np.ndarray:
    return MarkState.fresh(q).t


def coset_half_exponents(cs: CosetStructure, o: int, half: str) -> np.ndarray:
    """Exponents of ``C'_o``: the first ``ceil(u/2)`` coset positions or the rest."""
    exps = coset_exponents(cs, o)
    cut = (cs.u + 1) // 2
    if half == "first":
        return exps[:cut]
    if half == "second":
        return exps[cut:]
    raise ValueError(f"half must be 'first' or 'second', got {half!r}")


def coset_shared_ds(ctx, cs: CosetStructure, o: int, half: str) -> np.ndarray:
    """Values ``d`` of ``C_{o+1}`` outside ``z * C'_o``, ascending coset position."""
    c_vals = ctx.exp[coset_half_exponents(cs, o, half)]
    excluded = {ctx.mul(cs.z, int(c)) for c in c_vals}
    nxt = ctx.exp[coset_exponents(cs, (o + 1) % cs.v)]
    keep = np.array([int(d) not in excluded for d in nxt], dtype=bool)
    return np.ascontiguousarray(nxt[keep])


def verify_coset_alg3(ctx, cs: CosetStructure, o: int, half: str,
                      phase2: str = "hybrid", scratch: Optional[_Scratch] = None) -> list[COutcome]:
    """Algorithm 3 for ``c`` in one half of ``C_o``; outcomes sorted by ``c``.

    Phase one marks ``g_n + d`` for every shared ``d``. When that covers
    everything each ``c`` succeeds with ``m_terminal`` equal to the number
    of ``d`` used; otherwise each ``c`` continues from a copy of the shared
    table with ``phase2`` (``alg1`` or ``hybrid``), restarting at ``m = 1``.
    """
    if phase2 not in ("alg1", "hybrid"):
        raise ValueError(f"phase-2 strategy must be alg1 or hybrid, got {phase2!r}")
    scratch = scratch or _Scratch(ctx)
    cs_vals = sorted(int(c) for c in ctx.exp[coset_half_exponents(cs, o, half)])
    ds = coset_shared_ds(ctx, cs, o, half)
    scratch.reset()
    shared = scratch.t
    r, used = K.mark_values(shared, ctx.q - 1, scratch.prims, ds, ctx.p, ctx.k,
                            ctx.exp, ctx.log, ctx.prim_exps, scratch.zech)
    if r == 0:
        return [COutcome(c, True, int(used), 0) for c in cs_vals]
    out = []
    for c in cs_vals:
        t = shared.copy()
        out.append(_run(ctx, c, t, int(r), phase2, scratch))
    return out


@dataclass
class QReport:
    """Whole-field verdict. Arrays are indexed in parallel and sorted by ``c``."""

    q: int
    p: int
    k: int
    strategy: str
    c_values: np.ndarray
    success: np.ndarray
    m_terminal: np.ndarray
    failures: dict[int, tuple[int, ...]] = field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return bool(self.success.all())

    @property
    def mean_m(self) -> float:
        ok = self.success
        return float(self.m_terminal[ok].mean()) if ok.any() else float("nan")

    def m_hist(self) -> dict[int, int]:
        vals, counts = np.unique(self.m_terminal[self.success], return_counts=True)
        return {int(v): int(n) for v, n in zip(vals, counts)}

    def outcomes(self) -> list[COutcome]:
        out = []
        for c, ok, m in zip(self.c_values, self.success, self.m_terminal):
            left = self.failures.get(int(c), ())
            out.append(COutcome(int(c), bool(ok), int(m), len(left), left))
        return out


def _collect(ctx, strategy: str, outcomes: Sequence[COutcome]) -> QReport:
    outcomes = sorted(outcomes, key=lambda o: o.c)
    return QReport(
        ctx.q, ctx.p, ctx.k, strategy,
        np.array([o.c for o in outcomes], dtype=np.int64),
        np.array([o.success for o in outcomes], dtype=bool),
        np.array([o.m_terminal for o in outcomes], dtype=np.int64),
        {o.c: o.unresolved for o in outcomes if not o.success},
    )


def verify_c_values(ctx, c_values: Sequence[int], strategy: str) -> list[COutcome]:
    """Run a per-``c`` strategy (alg1, alg2 or hybrid) over the given values."""
    if strategy not in _MODES:
        raise ValueError(f"per-c strategy must be one of {sorted(_MODES)}, got {strategy!r}")
    scratch = _Scratch(ctx)
    out = []
    for c in c_values:
        scratch.reset()
        out.append(_run(ctx, int(c), scratch.t, ctx.q - 1, strategy, scratch))
    return out


def coset_tasks(cs: CosetStructure) -> list[tuple[int, str]]:
    """All ``(o, half)`` pairs; together they cover every nonzero ``c`` once."""
    return [(o, h) for o in range(cs.v) for h in ("first", "second")]


def alg3_available(ctx) -> Optional[CosetStructure]:
    return coset_structure(ctx) if ctx.k == 1 else None


def verify_q(q, strategy: str = "alg3-auto") -> QReport:
    """Decide whether every ``(a, c)`` admits a representation in ``F_q``.

    ``q`` may also be a prebuilt field context.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    ctx = build_field_ctx(q) if isinstance(q, (int, np.integer)) else q
    if ctx.q < 3:
        raise ValueError("q must be at least 3")
    if strategy == "alg3-auto":
        cs = alg3_available(ctx)
        if cs is None:
            return _collect(ctx, strategy, verify_c_values(ctx, range(1, ctx.q), "hybrid"))
        scratch = _Scratch(ctx)
        outs = []
        for o, half in coset_tasks(cs):
            outs += verify_coset_alg3(ctx, cs, o, half, scratch=scratch)
        return _collect(ctx, strategy, outs)
    return _collect(ctx, strategy, verify_c_values(ctx, range(1, ctx.q), strategy))


def expected_mean_m(p: int, phi_pm1: Optional[int] = None) -> float:
    """Heuristic mean terminating ``m``: ``log(1/(2p)) / log(1 - phi(p-1)/p)``."""
    if p < 3:
        raise ValueError("p must be at least 3")
    if phi_pm1 is None:
        phi_pm1 = factor_profile(p - 1).phi
    return math.log(1 / (2 * p)) / math.log(1 - phi_pm1 / p)


def alg1_with_witnesses(ctx, c: int) -> tuple[COutcome, dict[int, tuple[int, int]]]:
    """Plain-Python Algorithm 1 recording, for each marked ``a``, the pair
    ``(g_n, g_m)`` that marked it. Debug aid for small fields."""
    prims = [int(x) for x in ctx.prim_values]
    t = {0}
    witness: dict[int, tuple[int, int]] = {}
    for m, gm in enumerate(prims, start=1):
        d = ctx.mul(c, gm)
        for gn in prims:
            a = ctx.add(gn, d)
            if a not in t:
                t.add(a)
                witness[a] = (gn, gm)
        if len(t) == ctx.q:
            return COutcome(c, True, m, 0), witness
    left = tuple(a for a in range(ctx.q) if a not in t)
    return COutcome(c, False, 0, len(left), left), witness
