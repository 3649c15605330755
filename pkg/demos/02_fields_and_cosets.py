"""
Prime fields, cosets and extension fields
=========================================

Tables behind the verification engine: primitive roots of F_p, the
coset split used to share work between values of c, and F_{p^k} with
x as its primitive root.
"""

import numpy as np

from primsums.gfp import build_prime_ctx, coset_members, coset_structure
from primsums.gfq import build_field_ctx, field_mul, unpack

# F_13: least primitive root 2, and phi(12) = 4 primitive roots.
ctx = build_prime_ctx(13)
print("g =", ctx.g, "primitive roots:", sorted(ctx.prim_values.tolist()))

# 12 = 2^2 * 3, so u = 3 (largest prime dividing p - 1 exactly once) and v = 4.
cs = coset_structure(ctx)
print("u, v, z =", cs.u, cs.v, cs.z)
for o in range(cs.v):
    print(f"  C_{o} =", coset_members(cs, ctx, o).tolist())
# G = C_1 holds u - 1 primitive roots and the single non-primitive z.
G = coset_members(cs, ctx, 1)
print("primitive flags on G:", ctx.primitive[G].tolist())

# F_9: the first monic quadratic in which x has order 8.
f9 = build_field_ctx(9)
print("\nF_9 modulus (low degree first):", f9.modulus)
print("powers of x as packed indices:", f9.exp.tolist())
x = (0, 1)
print("x * x =", field_mul(x, x, f9), "= packed", f9.mul(3, 3))

# F_{2^16}: same layout, built in well under a second.
big = build_field_ctx(2**16)
print("\nF_65536 modulus:", big.modulus)
print("primitive elements:", int(big.primitive.sum()), "= phi(65535)")
print("x^100 =", unpack(int(big.exp[100]), 2, 16))
