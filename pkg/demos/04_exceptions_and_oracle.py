"""
Exceptions and the brute-force oracle
=====================================

Small fields where some a has no representation, the certificates the
engine returns for them, and exhaustive checks of the counting bounds.
"""

from primsums.numthy import prime_powers_in
from primsums.oracle import (brute_force_exceptions, build_freeness_index,
                             check_all_inequalities, count_N, count_N_all_a, in_G_bruteforce)
from primsums.verify import verify_q

print("exceptions up to 200:", brute_force_exceptions(200))

# For q = 61 the engine reports which (a, c) fail ...
rep = verify_q(61, "hybrid")
for c, left in rep.failures.items():
    print(f"c = {c}: no representation for a in {list(left)}")

# ... and the oracle agrees: N(q-1, q-1) = 0 exactly there.
fi = build_freeness_index(61)
counts = count_N_all_a(fi, 1, 60, 60)
print("zero counts for c = 1:", [a for a in range(1, 61) if counts[a] == 0])
print("first failing pair by brute force:", in_G_bruteforce(61, fi)[1])

# N(1, 1) counts every g except 0 and a/c.
print("N(1,1) for q = 61:", count_N(fi, 5, 7, 1, 1))

# The sieve inequalities and the bounds on N hold for every small field.
total = 0
for q, _, _ in prime_powers_in(3, 60):
    t = check_all_inequalities(q)
    total += t.checks
    assert t.violations == 0, (q, t.first_violation)
print(f"{total} inequality instances checked for q <= 60, none violated")
