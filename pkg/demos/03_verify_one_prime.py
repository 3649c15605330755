"""
Verifying one prime
===================

Runs the per-c algorithms and the coset algorithm on p = 2131, the
smallest value the sieve leaves for direct checking, and compares the
terminating m with the heuristic mean.
"""

import time

import numpy as np

from primsums.gfp import build_prime_ctx
from primsums.verify import expected_mean_m, verify_c_values, verify_q

p = 2131
ctx = build_prime_ctx(p)
print(f"p = {p}: {ctx.phi_pm1} primitive roots out of {p - 1}")

# Warm up the compiled kernels once so the timings below are fair.
verify_q(67, "hybrid")
verify_q(67, "alg3-auto")

for strategy in ("alg1", "alg2", "hybrid", "alg3-auto"):
    t0 = time.perf_counter()
    rep = verify_q(ctx, strategy)
    dt = time.perf_counter() - t0
    print(f"{strategy:>10}: all c ok = {rep.overall}, {dt:.3f} s")

# The per-c strategies stop at the same m for every c: the hybrid only
# changes the bookkeeping, not which pairs get marked.
cs = range(1, p)
same = verify_c_values(ctx, cs, "alg1") == verify_c_values(ctx, cs, "hybrid")
print("alg1 and hybrid agree on every m:", same)

rep = verify_q(ctx, "hybrid")
hist = rep.m_hist()
print("\nterminating m histogram:", hist)
print(f"mean m = {rep.mean_m:.2f}, heuristic {expected_mean_m(p):.2f}")

# A larger prime for comparison.
p2 = 10007
rep2 = verify_q(p2, "hybrid")
print(f"p = {p2}: mean m = {rep2.mean_m:.2f}, heuristic {expected_mean_m(p2):.2f}")
