"""
The sieve and the candidate table
=================================

Bucket bounds per omega(q - 1), the omega = 8 walk-through, and the
initial/final candidate counts. Runs in a few seconds.
"""

from fractions import Fraction

from primsums.numthy import factor_profile, omega_table
from primsums.sieve import (SUMMARY_HEADER, bucket_bound, build_candidates, sieve_rhs, delta_of,
                            sieve_check, summarize)

# The worst case for a given omega puts the smallest primes into q - 1.
# For omega = 8 the best kernel keeps {2, 3, 5} and sieves the other five.
delta = delta_of([7, 11, 13, 17, 19])
print("delta =", delta, "~", float(delta))
print("bound =", float(sieve_rhs(5, delta, 2**3)))

# Exactly one prime power with omega(q - 1) = 8 lies below that bound,
# and its own factorization lets the sieve finish it off.
q = 13123111
print(q - 1, "=", " * ".join(str(p) for p in factor_profile(q - 1).primes))
choice = sieve_check(q)
print("kernel primes", choice.e_primes, "sieved", choice.sieved_primes,
      "rhs ~", float(choice.rhs), "< q:", choice.passes)

# Repeating this for every omega bucket gives the whole table.
tab = omega_table(int(bucket_bound(8)[0]) + 1)
print()
print(SUMMARY_HEADER)
for om in range(3, 9):
    print(summarize(om, build_candidates(om, omega_cache=tab)).row())

# Exact rationals matter: the omega = 8 bound is only 0.005 above an integer.
print("\nbound - 14647129 =", bucket_bound(8)[0] - Fraction(14647129))
