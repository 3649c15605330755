"""Exhaustive verification that every nonzero element of F_q is ``g_n + c*g_m``
for primitive roots ``g_n, g_m``, together with the sieve that reduces the
question to finitely many ``q``."""

from .numthy import FactorProfile, PrimePowerId, classify_prime_power, factor_profile, prime_powers_in
from .sieve import (CandidateRecord, SieveChoice, bucket_bound, build_candidates, sieve_rhs,
                    delta_of, sieve_check)
from .gfp import CosetStructure, PrimeFieldCtx, build_prime_ctx, coset_members, coset_structure
from .gfq import ExtFieldCtx, build_ext_ctx, build_field_ctx, find_primitive_modulus, pack, unpack
from .verify import (COutcome, QReport, expected_mean_m, verify_c_alg1, verify_c_alg2,
                     verify_c_hybrid, verify_coset_alg3, verify_q)

__version__ = "0.1.0"
