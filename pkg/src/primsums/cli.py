"""Command-line harness.

Exit codes: 0 when everything verified or matched expectations, 1 on an
operational error (I/O, bad input, checksum mismatch), 2 when a
mathematical counterexample was found.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import oracle, sieve
from .numthy import classify_prime_power, omega_table, prime_powers_in
from .runner import (combined_crc, default_jobs, failure_witnesses, plan_units,
                     reports_to_lines, run_units)
from .verify import STRATEGIES, verify_q

log = logging.getLogger("primsums")

EXIT_OK, EXIT_ERROR, EXIT_COUNTEREXAMPLE = 0, 1, 2


def cmd_sieve(args) -> int:
    summaries, records = [], []
    tab = omega_table(int(sieve.bucket_bound(args.omega_max)[0]) + 1)
    for om in range(args.omega_max, args.omega_min - 1, -1):
        recs = sieve.build_candidates(om, args.qmin, omega_cache=tab)
        summaries.append(sieve.summarize(om, recs))
        records += recs
    records.sort(key=lambda r: r.q)
    try:
        sieve.write_candidates_csv(args.out, records)
        lines = [sieve.SUMMARY_HEADER] + [s.row() for s in summaries]
        retained = [r for r in records if r.status == "retained"]
        lines.append(f"total retained: {len(retained)} "
                     f"({sum(r.k == 1 for r in retained)} primes + "
                     f"{sum(r.k > 1 for r in retained)} prime powers)")
        Path(str(args.out) + ".summary.txt").write_text("\n".join(lines) + "\n")
    except OSError as exc:
        log.error("cannot write %s: %s", args.out, exc)
        return EXIT_ERROR
    print("\n".join(lines))
    return EXIT_OK


def _verify_once(q: int, strategy: str, c_lo: int, c_hi: Optional[int], jobs: int,
                 unit_size: Optional[int], timing: bool):
    units = plan_units(q, strategy, c_lo, c_hi, unit_size)
    return run_units(units, jobs, timing)


def cmd_verify(args) -> int:
    q = args.q
    if q < 3 or classify_prime_power(q) is None:
        log.error("%d is not a prime power >= 3", q)
        return EXIT_ERROR
    c_hi = args.c_to if args.c_to is not None else q - 1
    try:
        reports = _verify_once(q, args.strategy, args.c_from, c_hi, args.jobs,
                               args.unit_size, args.timing)
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_ERROR
    lines = reports_to_lines(reports)
    if args.verify_twice:
        again = _verify_once(q, args.strategy, args.c_from, c_hi, args.jobs,
                             args.unit_size, args.timing)
        first = [r.crc for r in reports]
        second = [r.crc for r in again]
        if first != second:
            log.error("second run disagrees with the first on %d unit checksums",
                      sum(a != b for a, b in zip(first, second)))
            return EXIT_ERROR
        print(f"second run reproduced all {len(first)} unit checksums", file=sys.stderr)
    text = "\n".join(lines) + "\n"
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            log.error("cannot write %s: %s", args.out, exc)
            return EXIT_ERROR
    else:
        sys.stdout.write(text)
    ok = all(r.ok for r in reports)
    print(f"q={q} {'verified' if ok else 'COUNTEREXAMPLE'}; "
          f"crc32={combined_crc(reports):08x}", file=sys.stderr)
    if not ok:
        for a, c in failure_witnesses(reports, limit=20):
            print(f"  no representation: a={a} c={c}", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def _read_manifest(path: Path) -> set[int]:
    done = set()
    if path.exists():
        for line in path.read_text().splitlines():
            parts = line.split()
            if len(parts) >= 2 and parts[0] == "done":
                done.add(int(parts[1]))
    return done


def cmd_verify_list(args) -> int:
    try:
        records = sieve.read_candidates_csv(args.input)
    except (OSError, ValueError) as exc:
        log.error("cannot read candidate list: %s", exc)
        return EXIT_ERROR
    todo = [r for r in records if r.status == "retained" and (args.qmax is None or r.q <= args.qmax)]
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = out_dir / "manifest.txt"
    if not args.resume and manifest.exists():
        manifest.unlink()
    done = _read_manifest(manifest)
    failed = []
    with manifest.open("a") as mf:
        for rec in todo:
            if rec.q in done and (out_dir / f"q{rec.q}.jsonl").exists():
                continue
            strategy = args.strategy
            if strategy == "auto":
                strategy = "alg3-auto" if rec.k == 1 else "alg2"
            t0 = time.perf_counter()
            reports = run_units(plan_units(rec.q, strategy), args.jobs, args.timing)
            (out_dir / f"q{rec.q}.jsonl").write_text("\n".join(reports_to_lines(reports)) + "\n")
            for r in reports:
                mf.write(f"unit {rec.q} {r.unit.unit_id} {r.crc:08x}\n")
            ok = all(r.ok for r in reports)
            mf.write(f"done {rec.q} {'ok' if ok else 'FAIL'} {combined_crc(reports):08x}\n")
            mf.flush()
            if not ok:
                failed.append(rec.q)
            log.info("q=%d %s in %.1fs", rec.q, "ok" if ok else "FAIL", time.perf_counter() - t0)
    n_p = sum(r.k == 1 for r in todo)
    print(f"verified {len(todo) - len(failed)}/{len(todo)} retained values "
          f"({n_p} primes + {len(todo) - n_p} prime powers)")
    if failed:
        print("counterexamples at q = " + ", ".join(map(str, failed)))
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def cmd_exceptions(args) -> int:
    found = oracle.brute_force_exceptions(args.max)
    print(",".join(map(str, found)))
    expected = [q for q in oracle.KNOWN_EXCEPTIONS if q <= args.max]
    if found != expected:
        print(f"expected {expected}", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def _sampled_cs(q: int) -> list[int]:
    rng = random.Random(q)
    return sorted({1, q - 1, rng.randrange(1, q)})


def cmd_lemmas(args) -> int:
    """Exhaustive inequality checks up to ``exhaustive_qmax``; beyond that
    every ``(a, e, l)`` for three values of ``c``."""
    bad = 0
    for q, _, _ in prime_powers_in(3, args.qmax):
        if q <= args.exhaustive_qmax:
            tally = oracle.check_all_inequalities(q)
        else:
            tally = oracle.check_all_inequalities(q, c_values=_sampled_cs(q))
        if tally.violations:
            bad += 1
            print(f"q={q}: {tally.violations} violations, first {tally.first_violation}")
        else:
            log.info("q=%d: %d checks ok", q, tally.checks)
    print("all inequality checks passed" if bad == 0 else f"{bad} fields with violations")
    return EXIT_OK if bad == 0 else EXIT_COUNTEREXAMPLE


def cmd_bruteforce(args) -> int:
    q = args.q
    if q < 3 or classify_prime_power(q) is None:
        log.error("%d is not a prime power >= 3", q)
        return EXIT_ERROR
    member, witness = oracle.in_G_bruteforce(q)
    engine = verify_q(q, "hybrid").overall
    print(json.dumps({"q": q, "bruteforce": member, "engine": engine,
                      "witness": None if witness is None else {"a": witness[0], "c": witness[1]}}))
    return EXIT_OK if member == engine else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="primsums", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sieve", help="build the candidate list")
    s.add_argument("--omega-min", type=int, default=3)
    s.add_argument("--omega-max", type=int, default=8)
    s.add_argument("--qmin", type=int, default=sieve.DEFAULT_QMIN)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sieve)

    v = sub.add_parser("verify", help="verify one prime power")
    v.add_argument("--q", type=int, required=True)
    v.add_argument("--c-from", type=int, default=1)
    v.add_argument("--c-to", type=int)
    v.add_argument("--strategy", choices=STRATEGIES, default="alg3-auto")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--unit-size", type=int, help="c values (or coset tasks) per work unit")
    v.add_argument("--out")
    v.add_argument("--verify-twice", action="store_true")
    v.add_argument("--timing", action="store_true", help="record wall_ms (breaks byte-identity)")
    v.set_defaults(func=cmd_verify)

    vl = sub.add_parser("verify-list", help="verify every retained candidate of a CSV")
    vl.add_argument("--in", dest="input", required=True)
    vl.add_argument("--jobs", type=int, default=default_jobs())
    vl.add_argument("--out", required=True)
    vl.add_argument("--resume", action="store_true")
    vl.add_argument("--qmax", type=int)
    vl.add_argument("--strategy", choices=STRATEGIES + ("auto",), default="auto")
    vl.add_argument("--timing", action="store_true")
    vl.set_defaults(func=cmd_verify_list)

    e = sub.add_parser("exceptions", help="brute-force all prime powers up to --max")
    e.add_argument("--max", type=int, default=2130)
    e.set_defaults(func=cmd_exceptions)

    lm = sub.add_parser("lemmas", help="check the sieve inequalities by exhaustive counting")
    lm.add_argument("--qmax", type=int, default=500)
    lm.add_argument("--exhaustive-qmax", type=int, default=200)
    lm.set_defaults(func=cmd_lemmas)

    b = sub.add_parser("bruteforce", help="decide one q by exhaustive search")
    b.add_argument("--q", type=int, required=True)
    b.set_defaults(func=cmd_bruteforce)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if getattr(args, "command", None) == "sieve" and not 1 <= args.omega_min <= args.omega_max <= 8:
        log.error("need 1 <= omega-min <= omega-max <= 8")
        return EXIT_ERROR
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
