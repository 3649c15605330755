import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from primsums.gfq import (build_ext_ctx, build_field_ctx, field_add, field_mul, field_sub,
                          find_primitive_modulus, pack, unpack, x_has_full_order)
from primsums.numthy import factor_profile


def _naive_mulmod(a, b, modulus, p):
    """Long multiplication then long division by the monic ``modulus``."""
    k = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    while len(prod) > k:
        top = prod.pop()
        for i in range(k):
            prod[len(prod) - k + i] = (prod[len(prod) - k + i] - top * modulus[i]) % p
    return tuple(prod + [0] * (k - len(prod)))


def _x_order(modulus, p):
    k = len(modulus) - 1
    one = (1,) + (0,) * (k - 1)
    x = (0, 1) + (0,) * (k - 2)
    y, n = x, 1
    while y != one:
        y = _naive_mulmod(y, x, modulus, p)
        n += 1
        if n > p**k:
            return None
    return n


def _first_modulus_by_order(p, k):
    for code in range(p**k):
        low = [(code // p**i) % p for i in range(k)]
        mod = tuple(low) + (1,)
        if low[0] and _x_order(mod, p) == p**k - 1:
            return mod
    return None


def test_pack_examples():
    assert pack((1, 2), 3) == 7
    assert pack((0, 0, 0), 2) == 0
    assert unpack(23, 5, 2) == (3, 4)
    with pytest.raises(ValueError):
        pack((3, 0), 3)
    with pytest.raises(ValueError):
        unpack(9, 3, 2)


@given(st.sampled_from([(2, 5), (3, 3), (5, 2), (7, 3)]), st.data())
def test_pack_bijection(pk, data):
    p, k = pk
    a = data.draw(st.integers(0, p**k - 1))
    assert pack(unpack(a, p, k), p) == a


@pytest.mark.parametrize("p,k", [(2, 2), (3, 2), (2, 4), (2, 3), (5, 2), (3, 3), (7, 2), (2, 6)])
def test_modulus_matches_naive_scan(p, k):
    assert find_primitive_modulus(p, k) == _first_modulus_by_order(p, k)


def test_modulus_examples():
    assert find_primitive_modulus(2, 2) == (1, 1, 1)
    mod = find_primitive_modulus(2, 4)
    assert _x_order(mod, 2) == 15


def test_x_squared_in_f4():
    ctx = build_ext_ctx(2, 2)
    assert field_mul((0, 1), (0, 1), ctx) == (1, 1)
    assert set(ctx.prim_values.tolist()) == {pack((0, 1), 2), pack((1, 1), 2)}


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27, 32, 49, 64, 81, 121, 125, 243, 256, 343, 625, 729, 1024])
def test_ext_contexts(q):
    ctx = build_field_ctx(q)
    prof = factor_profile(q - 1)
    assert x_has_full_order(ctx.modulus[:-1], ctx.p, ctx.k, prof)
    assert int(ctx.primitive.sum()) == prof.phi
    assert len(set(ctx.exp.tolist())) == q - 1 and 0 not in set(ctx.exp.tolist())
    # exp table agrees with schoolbook powers of x
    y = (1,) + (0,) * (ctx.k - 1)
    for j in range(min(q - 1, 300)):
        assert ctx.exp[j] == pack(y, ctx.p)
        y = _naive_mulmod(y, (0, 1) + (0,) * (ctx.k - 2), ctx.modulus, ctx.p)
    prims = {a for a in range(1, q) if math.gcd(int(ctx.log[a]), q - 1) == 1}
    assert set(np.flatnonzero(ctx.primitive).tolist()) == prims


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([9, 25, 27, 64, 81, 343]), st.data())
def test_field_ops_agree_with_tables(q, data):
    ctx = build_field_ctx(q)
    p, k = ctx.p, ctx.k
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    A, B, C = unpack(a, p, k), unpack(b, p, k), unpack(c, p, k)
    assert pack(field_mul(A, B, ctx), p) == ctx.mul(a, b)
    assert pack(field_add(A, B, ctx), p) == ctx.add(a, b)
    assert pack(field_sub(A, B, ctx), p) == ctx.sub(a, b)
    assert field_mul(A, B, ctx) == _naive_mulmod(A, B, ctx.modulus, p)
    # distributivity and associativity
    assert field_mul(A, field_add(B, C, ctx), ctx) == field_add(field_mul(A, B, ctx), field_mul(A, C, ctx), ctx)
    assert field_mul(field_mul(A, B, ctx), C, ctx) == field_mul(A, field_mul(B, C, ctx), ctx)
    one = (1,) + (0,) * (k - 1)
    assert field_mul(A, one, ctx) == A
    if a:
        assert ctx.power(a, q - 1) == 1


def test_build_field_ctx_errors():
    for bad in (1, 6, 12, 100):
        with pytest.raises(ValueError):
            build_field_ctx(bad)
    with pytest.raises(ValueError):
        find_primitive_modulus(4, 2)


def test_large_extension_builds():
    ctx = build_field_ctx(2**21)
    assert int(ctx.primitive.sum()) == factor_profile(2**21 - 1).phi


@pytest.mark.parametrize("q", [9, 25, 27, 49, 81, 125, 343, 625, 729, 2187])
def test_zech_table(q):
    ctx = build_field_ctx(q)
    p, k = ctx.p, ctx.k
    one = (1,) + (0,) * (k - 1)
    for n in range(q - 1):
        s = field_add(one, unpack(int(ctx.exp[n]), p, k), ctx)
        if any(s):
            assert ctx.exp[ctx.zech[n]] == pack(s, p)
        else:
            assert ctx.zech[n] == -1 and n == (q - 1) // 2


def test_no_zech_in_characteristic_two():
    assert build_field_ctx(64).zech.size == 0
