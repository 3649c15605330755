"""Work units, checksummed unit reports and the parallel scheduler.

A work unit is either a contiguous range of ``c`` (per-``c`` strategies) or
a set of ``(o, half)`` coset tasks (coset strategy). Its report carries a
CRC-32 computed from the outcomes alone, so a stored report can be checked
without rerunning anything. Output order never depends on scheduling.
"""

from __future__ import annotations

import json
import math
import os
import struct
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .gfq import build_field_ctx
from .verify import COutcome, _Scratch, alg3_available, coset_tasks, verify_c_values, verify_coset_alg3

DEFAULT_UNITS_PER_Q = 64


@dataclass(frozen=True)
class WorkUnit:
    q: int
    strategy: str
    c_lo: int = 0
    c_hi: int = 0
    tasks: tuple[tuple[int, str], ...] = ()

    @property
    def kind(self) -> str:
        return "coset" if self.tasks else "c-range"

    @property
    def unit_id(self) -> str:
        if not self.tasks:
            return f"c{self.c_lo}-{self.c_hi}"
        (o0, h0), (o1, h1) = self.tasks[0], self.tasks[-1]
        if len(self.tasks) == 1:
            return f"o{o0}:{h0}"
        return f"o{o0}:{h0}-o{o1}:{h1}"


@dataclass
class UnitReport:
    unit: WorkUnit
    p: int
    k: int
    outcomes: list[COutcome]
    wall_ms: int = 0
    crc: int = field(init=False)

    def __post_init__(self) -> None:
        self.outcomes.sort(key=lambda o: o.c)
        self.crc = outcome_crc32(self.outcomes)

    @property
    def ok(self) -> bool:
        return all(o.success for o in self.outcomes)

    def m_hist(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for o in self.outcomes:
            if o.success:
                hist[o.m_terminal] = hist.get(o.m_terminal, 0) + 1
        return dict(sorted(hist.items()))

    def to_record(self) -> dict:
        cs = [o.c for o in self.outcomes]
        rec = {
            "q": self.unit.q,
            "p": self.p,
            "k": self.k,
            "unit": self.unit.unit_id,
            "c_lo": min(cs),
            "c_hi": max(cs),
            "ok": self.ok,
            "failures": [{"c": o.c, "residual_a": list(o.unresolved)}
                         for o in self.outcomes if not o.success],
            "m_hist": {str(m): n for m, n in self.m_hist().items()},
            "crc32": f"{self.crc:08x}",
            "wall_ms": self.wall_ms,
            "m": [o.m_terminal if o.success else 0 for o in self.outcomes],
        }
        if self.unit.tasks:
            rec["c"] = cs
        return rec

    def to_json(self) -> str:
        return json.dumps(self.to_record(), separators=(",", ":"))


def outcome_crc32(outcomes: Iterable[COutcome]) -> int:
    """CRC-32 (zlib polynomial) over ``<c:u64><m_terminal:u64><success:u8>``
    little-endian records in ascending ``c``."""
    buf = b"".join(struct.pack("<QQB", o.c, o.m_terminal if o.success else 0, int(o.success))
                   for o in sorted(outcomes, key=lambda o: o.c))
    return zlib.crc32(buf) & 0xFFFFFFFF


def record_outcomes(record: dict) -> list[COutcome]:
    """Per-``c`` outcomes stored in a JSON record (``m`` is 0 on failure)."""
    cs = record.get("c") or list(range(record["c_lo"], record["c_hi"] + 1))
    if len(cs) != len(record["m"]):
        raise ValueError(f"unit {record['unit']}: {len(cs)} c values but {len(record['m'])} m values")
    return [COutcome(int(c), m > 0, int(m), 0) for c, m in zip(cs, record["m"])]


def check_record(record: dict) -> bool:
    """Does the stored checksum match the stored outcomes?"""
    return f"{outcome_crc32(record_outcomes(record)):08x}" == record["crc32"]


def plan_units(q: int, strategy: str, c_lo: int = 1, c_hi: Optional[int] = None,
               unit_size: Optional[int] = None, ctx=None) -> list[WorkUnit]:
    """Partition the work for ``q``; independent of the number of workers."""
    c_hi = q - 1 if c_hi is None else c_hi
    if not 1 <= c_lo <= c_hi <= q - 1:
        raise ValueError(f"c range [{c_lo}, {c_hi}] outside [1, {q - 1}]")
    if strategy == "alg3-auto" and c_lo == 1 and c_hi == q - 1:
        ctx = ctx or build_field_ctx(q)
        cs = alg3_available(ctx)
        if cs is not None:
            tasks = coset_tasks(cs)
            size = unit_size or 1
            return [WorkUnit(q, strategy, tasks=tuple(tasks[i:i + size]))
                    for i in range(0, len(tasks), size)]
    per_c = "hybrid" if strategy == "alg3-auto" else strategy
    n = c_hi - c_lo + 1
    size = unit_size or math.ceil(n / DEFAULT_UNITS_PER_Q)
    return [WorkUnit(q, per_c, lo, min(lo + size - 1, c_hi)) for lo in range(c_lo, c_hi + 1, size)]


_CTX_CACHE: dict[int, tuple] = {}


def _context(q: int):
    if q not in _CTX_CACHE:
        _CTX_CACHE.clear()
        ctx = build_field_ctx(q)
        _CTX_CACHE[q] = (ctx, alg3_available(ctx), _Scratch(ctx))
    return _CTX_CACHE[q]


def run_unit(unit: WorkUnit, timing: bool = False) -> UnitReport:
    ctx, cs, scratch = _context(unit.q)
    t0 = time.perf_counter()
    if unit.tasks:
        outs: list[COutcome] = []
        for o, half in unit.tasks:
            outs += verify_coset_alg3(ctx, cs, o, half, scratch=scratch)
    else:
        outs = verify_c_values(ctx, range(unit.c_lo, unit.c_hi + 1), unit.strategy)
    wall = int(round((time.perf_counter() - t0) * 1000)) if timing else 0
    return UnitReport(unit, ctx.p, ctx.k, outs, wall)


def _run_unit_star(args):
    return run_unit(*args)


def run_units(units: Sequence[WorkUnit], jobs: int = 1, timing: bool = False) -> list[UnitReport]:
    """Execute units on ``jobs`` worker processes; reports come back in unit order."""
    if jobs <= 1 or len(units) <= 1:
        return [run_unit(u, timing) for u in units]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunk = max(1, len(units) // (4 * jobs))
        return list(pool.map(_run_unit_star, [(u, timing) for u in units], chunksize=chunk))


def default_jobs() -> int:
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1)


def combined_crc(reports: Sequence[UnitReport]) -> int:
    """CRC-32 of all outcomes of a run, independent of the unit split."""
    outs = [o for r in reports for o in r.outcomes]
    return outcome_crc32(outs)


def failure_witnesses(reports: Sequence[UnitReport], limit: Optional[int] = None) -> list[tuple[int, int]]:
    """``(a, c)`` pairs with no representation, ascending by ``c`` then ``a``."""
    pairs = [(a, o.c) for r in reports for o in r.outcomes if not o.success for a in o.unresolved]
    pairs.sort(key=lambda ac: (ac[1], ac[0]))
    return pairs if limit is None else pairs[:limit]


def reports_to_lines(reports: Sequence[UnitReport]) -> list[str]:
    return [r.to_json() for r in sorted(reports, key=lambda r: (r.unit.q, min(o.c for o in r.outcomes)))]


def m_values(reports: Sequence[UnitReport]) -> np.ndarray:
    return np.array([o.m_terminal for r in reports for o in r.outcomes if o.success], dtype=np.int64)
