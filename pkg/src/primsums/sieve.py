"""Sufficient-condition sieve reducing the problem to a finite candidate list.

A prime power ``q`` is certified when, for a kernel ``e`` built from the
``j`` smallest primes of ``q - 1`` and the remaining ``s`` primes sieved,

    delta = 1 - 2 * sum(1/p_i) > 0   and   q > ((2s - 1)/delta + 2)**2 * W(e)**4.

All comparisons use exact rationals; the bucket bounds are close to the
integers they certify (14647129.006 against q = 14647129).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .numthy import FactorProfile, factor_profile, omega_table, prime_powers_in, primes_upto

DEFAULT_QMIN = 2131

CSV_FIELDS = ("q", "p", "k", "omega", "status", "e_primes", "s",
              "delta_num", "delta_den", "rhs_floor")


@dataclass(frozen=True)
class SieveChoice:
    j: int
    e_primes: tuple[int, ...]
    sieved_primes: tuple[int, ...]
    delta: Fraction
    rhs: Optional[Fraction]
    passes: bool

    @property
    def s(self) -> int:
        return len(self.sieved_primes)


@dataclass(frozen=True)
class CandidateRecord:
    q: int
    p: int
    k: int
    omega: int
    status: str  # "eliminated" | "retained"
    choice: Optional[SieveChoice] = None


def delta_of(sieved_primes: Iterable[int]) -> Fraction:
    """``1 - 2 * sum(1/p)``; may be non-positive."""
    return 1 - 2 * sum((Fraction(1, p) for p in sieved_primes), Fraction(0))


def sieve_rhs(s: int, delta: Fraction, w_e: int) -> Fraction:
    """Right-hand side ``((2s - 1)/delta + 2)**2 * w_e**4`` as an exact rational."""
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return (Fraction(2 * s - 1) / delta + 2) ** 2 * w_e**4


def _choice(q: int, primes: Sequence[int], j: int) -> SieveChoice:
    e_primes, sieved = tuple(primes[:j]), tuple(primes[j:])
    delta = delta_of(sieved)
    if delta <= 0:
        return SieveChoice(j, e_primes, sieved, delta, None, False)
    rhs = sieve_rhs(len(sieved), delta, 2**j)
    return SieveChoice(j, e_primes, sieved, delta, rhs, q > rhs)


def sieve_choices(q: int, profile: FactorProfile) -> list[SieveChoice]:
    """Every kernel choice ``j = omega, ..., 1`` for ``q`` (scan order)."""
    primes = profile.primes
    return [_choice(q, primes, j) for j in range(len(primes), 0, -1)]


def sieve_check(q: int, profile: Optional[FactorProfile] = None) -> Optional[SieveChoice]:
    """First passing kernel choice for ``q`` scanning ``j`` from large to small."""
    if profile is None:
        profile = factor_profile(q - 1)
    if profile.n != q - 1:
        raise ValueError(f"profile is for {profile.n}, expected q - 1 = {q - 1}")
    for choice in sieve_choices(q, profile):
        if choice.passes:
            return choice
    return None


def bucket_bound(omega: int) -> tuple[Fraction, int]:
    """Worst-case bound for ``omega(q - 1) = omega``.

    The worst case puts the ``omega`` smallest primes in ``q - 1``. Returns
    the minimal right-hand side over kernels with positive delta and the
    kernel size ``j`` attaining it.
    """
    if not 1 <= omega <= 8:
        raise ValueError(f"omega must be in 1..8, got {omega}")
    primes = [int(p) for p in primes_upto(100)[:omega]]
    best: Optional[tuple[Fraction, int]] = None
    for j in range(omega, 0, -1):
        delta = delta_of(primes[j:])
        if delta <= 0:
            continue
        rhs = sieve_rhs(omega - j, delta, 2**j)
        if best is None or rhs < best[0]:
            best = (rhs, j)
    assert best is not None  # j = omega always has delta = 1
    return best


def build_candidates(omega: int, q_min: int = DEFAULT_QMIN,
                     omega_cache: Optional[np.ndarray] = None) -> list[CandidateRecord]:
    """Initial list for one ``omega`` bucket with each entry run through the sieve.

    ``omega_cache`` may hold a precomputed :func:`omega_table` covering the
    bucket bound; it is only an accelerator.
    """
    bound, _ = bucket_bound(omega)
    q_max = math.floor(bound)
    if q_max < q_min:
        return []
    om = omega_cache if omega_cache is not None and len(omega_cache) > q_max else omega_table(q_max)
    out = []
    for q, p, k in prime_powers_in(q_min, q_max):
        if om[q - 1] != omega:
            continue
        choice = sieve_check(q, factor_profile(q - 1))
        status = "eliminated" if choice is not None else "retained"
        out.append(CandidateRecord(q, p, k, omega, status, choice))
    return out


@dataclass(frozen=True)
class BucketSummary:
    """One row of the per-omega summary table."""

    omega: int
    bound: Fraction
    largest_retained: Optional[int]
    initial: tuple[int, int]
    final: tuple[int, int]

    def row(self) -> str:
        largest = "---" if self.largest_retained is None else str(self.largest_retained)
        return (f"{self.omega:>5} {math.floor(self.bound):>10} {largest:>10} "
                f"{self.initial[0]:>6}+{self.initial[1]:<4} {self.final[0]:>5}+{self.final[1]:<4}")


def summarize(omega: int, records: Sequence[CandidateRecord]) -> BucketSummary:
    retained = [r for r in records if r.status == "retained"]
    return BucketSummary(
        omega,
        bucket_bound(omega)[0],
        max((r.q for r in retained), default=None),
        (sum(r.k == 1 for r in records), sum(r.k > 1 for r in records)),
        (sum(r.k == 1 for r in retained), sum(r.k > 1 for r in retained)),
    )


SUMMARY_HEADER = "omega upper_bound   largest    initial      final"


def record_to_row(rec: CandidateRecord) -> dict[str, str]:
    ch = rec.choice
    row = {"q": str(rec.q), "p": str(rec.p), "k": str(rec.k), "omega": str(rec.omega),
           "status": rec.status, "e_primes": "", "s": "", "delta_num": "",
           "delta_den": "", "rhs_floor": ""}
    if ch is not None:
        row.update(e_primes=";".join(map(str, ch.e_primes)), s=str(ch.s),
                   delta_num=str(ch.delta.numerator), delta_den=str(ch.delta.denominator),
                   rhs_floor=str(math.floor(ch.rhs)))
    return row


def write_candidates_csv(path, records: Iterable[CandidateRecord]) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
        wr.writeheader()
        for rec in records:
            wr.writerow(record_to_row(rec))


def read_candidates_csv(path) -> list[CandidateRecord]:
    """Parse a candidate CSV. Raises ``ValueError`` on malformed content."""
    out = []
    with open(path, newline="") as fh:
        rd = csv.DictReader(fh)
        if rd.fieldnames is None or tuple(rd.fieldnames) != CSV_FIELDS:
            raise ValueError(f"unexpected CSV header: {rd.fieldnames}")
        for line_no, row in enumerate(rd, start=2):
            try:
                q, p, k, om = (int(row[f]) for f in ("q", "p", "k", "omega"))
                status = row["status"]
                if status not in ("retained", "eliminated") or p**k != q:
                    raise ValueError("bad status or q != p**k")
                choice = None
                if status == "eliminated":
                    e_primes = tuple(int(x) for x in row["e_primes"].split(";") if x)
                    prof = factor_profile(q - 1)
                    choice = _choice(q, prof.primes, len(e_primes))
                    if choice.e_primes != e_primes or not choice.passes:
                        raise ValueError("elimination record does not re-verify")
            except (TypeError, ValueError, KeyError) as exc:
                raise ValueError(f"{path}:{line_no}: {exc}") from exc
            out.append(CandidateRecord(q, p, k, om, status, choice))
    return out
