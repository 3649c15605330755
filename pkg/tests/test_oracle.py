import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from primsums.gfq import build_field_ctx
from primsums.numthy import factor_profile, prime_powers_in
from primsums.oracle import (KNOWN_EXCEPTIONS, brute_force_exceptions, build_freeness_index,
                             check_all_inequalities, check_lemma1, check_lemma2,
                             check_theorem_bound, count_N, count_N_all_a, free_mask,
                             in_G_bruteforce, is_e_free, kernel_data, lemma1_holds,
                             lemma2_holds, min_N_full, theorem_bound_holds, theorem_bracket)
from primsums.sieve import sieve_rhs


def _py_dlog(p, g):
    out, x = {}, 1
    for j in range(p - 1):
        out[x] = j
        x = x * g % p
    return out


def _py_count_N(p, g, a, c, e1, e2):
    """Enumerate g in F_p with g e1-free and a - c g e2-free."""
    dl = _py_dlog(p, g)
    r1 = factor_profile(e1).rad
    r2 = factor_profile(e2).rad
    free = lambda x, r: x % p != 0 and math.gcd(dl[x % p], r) == 1
    return sum(1 for x in range(p) if free(x, r1) and free(a - c * x, r2))


def test_e_free_examples():
    fi = build_freeness_index(7)
    assert not is_e_free(fi, 2, 2)  # 2 = 3**2 in F_7
    assert all(is_e_free(fi, x, 1) for x in range(1, 7))
    assert not is_e_free(fi, 0, 1)
    with pytest.raises(ValueError):
        is_e_free(fi, 3, 4)


def test_primitivity_agrees_with_field_tables():
    for q, _, _ in prime_powers_in(3, 10**4):
        fi = build_freeness_index(q)
        ctx = build_field_ctx(q)
        assert np.array_equal(free_mask(fi, q - 1), ctx.primitive.astype(bool))


def test_count_N_examples():
    fi = build_freeness_index(7)
    assert count_N(fi, 1, 1, 6, 6) == 2
    for q in (7, 13, 16, 27, 31):
        fi = build_freeness_index(q)
        assert all(count_N(fi, a, c, 1, 1) == q - 2 for a in range(1, q) for c in (1, q - 1))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([11, 13, 19, 31, 37, 61, 73]), st.data())
def test_count_N_matches_python_enumeration(p, data):
    fi = build_freeness_index(p)
    divs = [d for d in range(1, p) if (p - 1) % d == 0]
    a = data.draw(st.integers(1, p - 1))
    c = data.draw(st.integers(1, p - 1))
    e1, e2 = data.draw(st.sampled_from(divs)), data.draw(st.sampled_from(divs))
    g = int(fi.exp[1])
    assert count_N(fi, a, c, e1, e2) == _py_count_N(p, g, a, c, e1, e2)
    assert count_N_all_a(fi, c, e1, e2)[a] == count_N(fi, a, c, e1, e2)


def test_sum_over_a_counts_primitive_pairs():
    for q, _, _ in prime_powers_in(3, 200):
        fi = build_freeness_index(q)
        prim = free_mask(fi, q - 1)
        phi = int(prim.sum())
        for c in {1, q - 1}:
            arr = count_N_all_a(fi, c, q - 1, q - 1)
            # pairs (g, g*) of primitives with c g + g* = 0 land at a = 0
            zero = sum(1 for x in np.flatnonzero(prim)
                       if prim[fi.sub(0, fi.mul(np.array([x]), c))[0]])
            assert int(arr[1:].sum()) == phi * phi - zero


def test_lemma_instances():
    fi = build_freeness_index(13)
    assert check_lemma1(fi, 1, 1, 2)
    assert check_theorem_bound(fi, 1, 1, 2)  # sieved {3}: delta = 1/3
    fi31 = build_freeness_index(31)
    assert check_lemma2(fi31, 1, 1, 2, 3)
    # e = 1: N(1,1) = q - 2 >= q - sqrt(q)
    assert lemma2_holds(fi31, 1, 1, 5).all()


def test_lemma_input_errors():
    fi = build_freeness_index(13)
    with pytest.raises(ValueError):
        lemma1_holds(fi, 1, 6)  # kernel covers Rad(12)
    with pytest.raises(ValueError):
        lemma2_holds(fi, 1, 2, 2)  # l | e
    with pytest.raises(ValueError):
        theorem_bound_holds(fi, 1, 1)  # delta = 1 - 2(1/2 + 1/3) < 0


def test_inequalities_zero_violations_small():
    for q in (13, 31, 61, 64, 81):
        t = check_all_inequalities(q)
        assert t.checks > 0 and t.violations == 0, t.first_violation


def test_theorem_bracket_consistent_with_sieve_bound():
    # positive bracket <=> q beats the sieve right-hand side
    for q, _, _ in prime_powers_in(3, 400):
        fi = build_freeness_index(q)
        primes = fi.profile.primes
        for j in range(1, len(primes) + 1):
            sieved = primes[j:]
            delta = 1 - 2 * sum((Fraction(1, p) for p in sieved), Fraction(0))
            if delta <= 0:
                continue
            rhs = sieve_rhs(len(sieved), delta, 2**j)
            assert (theorem_bracket(fi, math.prod(primes[:j])) > 0) == (q > rhs)


def test_q61_bracket_not_positive_for_any_kernel():
    fi = build_freeness_index(61)
    for e in (2, 6, 30):
        kd = kernel_data(fi, e)
        if kd.delta > 0:
            assert theorem_bracket(fi, e) <= 0


def test_membership_and_exceptions():
    assert brute_force_exceptions(10) == [3, 4, 5, 7]
    small = brute_force_exceptions(70)
    assert small[-1] == 61 and 64 not in small and 67 not in small
    assert in_G_bruteforce(67) == (True, None)
    ok, (a, c) = in_G_bruteforce(61)
    assert not ok and count_N(build_freeness_index(61), a, c, 60, 60) == 0
    assert KNOWN_EXCEPTIONS == (3, 4, 5, 7, 11, 13, 19, 31, 43, 61)


def test_min_N_full_sign_matches_membership():
    for q in (13, 16, 23, 25, 43, 47):
        fi = build_freeness_index(q)
        n, a, c = min_N_full(fi)
        assert (n > 0) == in_G_bruteforce(q, fi)[0]
        assert count_N(fi, a, c, q - 1, q - 1) == n


def test_lemma2_requires_q_at_least_4():
    fi = build_freeness_index(3)
    with pytest.raises(ValueError):
        lemma2_holds(fi, 1, 1, 2)
    # the inequality really is false there, which is why the hypothesis exists
    assert count_N(fi, 1, 1, 1, 1) == 1 < 3 - math.sqrt(3)
    t = check_all_inequalities(3)
    assert t.checks > 0 and t.violations == 0
