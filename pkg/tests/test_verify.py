import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from primsums.gfp import build_prime_ctx, coset_structure
from primsums.gfq import build_field_ctx
from primsums.numthy import factor_profile, prime_powers_in, primes_upto
from primsums.verify import (MarkState, RemainState, alg1_with_witnesses, coset_half_exponents,
                             coset_shared_ds, coset_tasks, expected_mean_m, verify_c_alg1,
                             verify_c_alg2, verify_c_hybrid, verify_c_values, verify_coset_alg3,
                             verify_q)
from primsums import _kernels as K


def _prime_roots(p):
    ls = factor_profile(p - 1).primes
    return {g for g in range(1, p) if all(pow(g, (p - 1) // l, p) != 1 for l in ls)}


def _bf_unrepresentable(p, c):
    """All ``a`` with no primitive ``g`` such that ``a - c*g`` is primitive."""
    prims = _prime_roots(p)
    hit = {(x + c * y) % p for x in prims for y in prims}
    return sorted(set(range(1, p)) - hit)


def test_q3_c1_fails_with_residual_2():
    ctx = build_prime_ctx(3)
    out, state = verify_c_alg1(ctx, 1)
    assert not out.success and out.residual == 1 and out.unresolved == (2,)
    assert out.m_terminal == 0
    assert state.r == 1 and state.unresolved().tolist() == [2]


def test_q7_c1():
    ctx = build_prime_ctx(7)
    out, _ = verify_c_alg1(ctx, 1)
    assert out.success == (not _bf_unrepresentable(7, 1))
    assert verify_q(7, "alg1").overall is False


def test_q23_c1_success():
    ctx = build_prime_ctx(23)
    assert _bf_unrepresentable(23, 1) == []
    out, _ = verify_c_alg1(ctx, 1)
    assert out.success and 1 <= out.m_terminal <= 10


@pytest.mark.parametrize("q,c", [(13, 2), (31, 1), (3, 1), (7, 1), (23, 1), (61, 1), (61, 60)])
def test_alg2_and_hybrid_match_alg1(q, c):
    ctx = build_prime_ctx(q)
    a1, _ = verify_c_alg1(ctx, c)
    a2 = verify_c_alg2(ctx, c)
    h = verify_c_hybrid(ctx, c)
    assert a1 == a2 == h
    assert list(a1.unresolved) == _bf_unrepresentable(q, c)


@pytest.mark.parametrize("q,expected", [(4, False), (61, False), (67, True), (43, False), (47, True)])
def test_verify_q_examples(q, expected):
    for strategy in ("alg1", "alg2", "hybrid", "alg3-auto"):
        assert verify_q(q, strategy).overall is expected


def test_failure_certificates_are_genuine():
    for q in (5, 7, 11, 13, 19, 31, 43, 61):
        rep = verify_q(q, "hybrid")
        assert not rep.overall
        for c, left in rep.failures.items():
            assert left and list(left) == _bf_unrepresentable(q, c)
        for c in rep.c_values[rep.success]:
            assert _bf_unrepresentable(q, int(c)) == []


def test_marking_soundness_with_witnesses():
    for q in [p for p in primes_upto(200).tolist() if p > 2] + [4, 8, 9, 16, 25, 27, 32, 49, 64, 81, 121, 125, 128, 169]:
        ctx = build_field_ctx(q)
        prim = ctx.primitive
        for c in {1, q - 1, q // 2 or 1}:
            out, wit = alg1_with_witnesses(ctx, c)
            for a, (gn, gm) in wit.items():
                assert prim[gn] and prim[gm] and a != 0
                assert ctx.add(gn, ctx.mul(c, gm)) == a
            ref = verify_c_values(ctx, [c], "alg1")[0]
            assert (ref.success, ref.m_terminal, ref.unresolved) == (out.success, out.m_terminal, out.unresolved)


def test_hybrid_conversion_preserves_unresolved_set():
    ctx = build_prime_ctx(2131)
    state = MarkState.fresh(ctx.q)
    prims = np.ascontiguousarray(ctx.prim_values)
    r, m_next = K.mark_rows(state.t, state.r, prims, ctx.exp, int(ctx.log[5]), ctx.prim_exps,
                            0, 3, ctx.p, ctx.k, -1.0, np.zeros(0, dtype=np.int64))
    state.r = r
    rem = RemainState.from_marks(state)
    assert rem.r == r == int((state.t == 0).sum())
    assert set(rem.remaining.tolist()) == set(np.flatnonzero(state.t == 0).tolist()) - {0}
    # continuing with alg2 from the converted state gives the alg1 verdict
    assert verify_c_alg2(ctx, 5, rem).success == verify_c_alg1(ctx, 5)[0].success


def test_m_terminal_identical_across_per_c_strategies():
    for q in (67, 101, 2131, 9, 27, 64):
        ctx = build_field_ctx(q)
        cs = range(1, q, max(1, q // 50))
        runs = [verify_c_values(ctx, cs, s) for s in ("alg1", "alg2", "hybrid")]
        assert runs[0] == runs[1] == runs[2]


def test_alg3_agrees_with_hybrid_per_c():
    for p in [p for p in primes_upto(1500).tolist() if p > 3]:
        ctx = build_prime_ctx(p)
        cs = coset_structure(ctx)
        if cs is None:
            continue
        a3 = verify_q(ctx, "alg3-auto")
        h = verify_q(ctx, "hybrid")
        assert np.array_equal(a3.c_values, np.arange(1, p))
        assert np.array_equal(a3.success, h.success)


def test_alg3_phase1_ds_are_c_times_primitive():
    for p in [p for p in primes_upto(10**4).tolist() if p > 3]:
        ctx = build_prime_ctx(p)
        cs = coset_structure(ctx)
        if cs is None:
            continue
        for o, half in coset_tasks(cs):
            cvals = ctx.exp[coset_half_exponents(cs, o, half)]
            ds = coset_shared_ds(ctx, cs, o, half)
            assert len(ds) == cs.u - len(cvals)
            # d / c via discrete logs, checked for every (d, c) pair at once
            ratio = ctx.exp[np.subtract.outer(ctx.log[ds], ctx.log[cvals]) % (p - 1)]
            assert ctx.primitive[ratio].all() and not (ratio == cs.z).any()


def test_alg3_phase2_alg1_variant_and_errors():
    ctx = build_prime_ctx(61)
    cs = coset_structure(ctx)
    outs = [o for o_, h in coset_tasks(cs) for o in verify_coset_alg3(ctx, cs, o_, h, phase2="alg1")]
    assert sorted(o.c for o in outs) == list(range(1, 61))
    assert {o.c for o in outs if not o.success} == {1, 60}
    with pytest.raises(ValueError):
        verify_coset_alg3(ctx, cs, 0, "middle")
    with pytest.raises(ValueError):
        verify_coset_alg3(ctx, cs, 0, "first", phase2="alg2")


def test_verify_q_rejects():
    with pytest.raises(ValueError):
        verify_q(10)
    with pytest.raises(ValueError):
        verify_q(7, "magic")
    with pytest.raises(ValueError):
        verify_c_values(build_prime_ctx(7), [0], "alg1")


def test_qreport_fields():
    rep = verify_q(2131, "alg3-auto")
    assert rep.overall and len(rep.c_values) == 2130 and not rep.failures
    assert sum(rep.m_hist().values()) == 2130
    assert rep.mean_m > 0


def test_expected_mean_m():
    assert expected_mean_m(10007) == pytest.approx(14.29, abs=0.01)
    # p - 1 = 2 * prime: phi(p-1)/p = (p - 3)/(2p)
    p = 2039
    assert expected_mean_m(p) == pytest.approx(math.log(2 * p) / -math.log(1 - (p - 3) / (2 * p)))
    assert expected_mean_m(4079) > expected_mean_m(2039)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([q.q for q in prime_powers_in(3, 400)]), st.data())
def test_random_c_strategies_agree(q, data):
    ctx = build_field_ctx(q)
    c = data.draw(st.integers(1, q - 1))
    outs = {s: verify_c_values(ctx, [c], s)[0] for s in ("alg1", "alg2", "hybrid")}
    assert outs["alg1"] == outs["alg2"] == outs["hybrid"]


@pytest.mark.parametrize("q", [9, 25, 27, 49, 81, 121, 125, 343, 625, 729])
def test_zech_and_digitwise_paths_agree(q):
    import dataclasses
    ctx = build_field_ctx(q)
    plain = dataclasses.replace(ctx, zech=np.zeros(0, dtype=np.int64))
    cs = range(1, q)
    for s in ("alg1", "alg2", "hybrid"):
        assert verify_c_values(ctx, cs, s) == verify_c_values(plain, cs, s)
