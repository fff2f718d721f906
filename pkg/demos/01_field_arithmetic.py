"""
Arithmetic in GF(2^n)
=====================

Elements are integers whose bits are polynomial-basis coordinates.
"""

import numpy as np

from ptlab.gf2m import frobenius, mult_order, new_field, trace_rel
from ptlab.poly import UniPoly, roots_in_field

# The modulus is the lexicographically smallest irreducible of degree n.
ctx = new_field(10)
print(f"GF(2^10) modulus: {ctx.modulus:#x}")

# Elem wraps an int with its field; the usual operators apply.
a, b = ctx(0x155), ctx(0x2A)
print("a*b =", a * b, " a/b =", a / b, " a^1023 =", a ** 1023)

# Frobenius x -> x^(2^k) and its order n
print("frob^10(a) == a:", frobenius(ctx, a, 10) == a)

# Roots of X^10+X^6+X^5+X^3+X^2+X+1 are primitive elements, and their
# relative traces down to GF(2^(2m)) vanish for gcd(m, 5) = 1.
roots = roots_in_field(ctx, UniPoly.from_exponents(ctx, [10, 6, 5, 3, 2, 1, 0]))
b0 = roots[0]
print("root", b0, "has order", mult_order(ctx, b0))
for m in (1, 2, 3):
    print(f"  m={m}: Tr(b) = {trace_rel(ctx, b0, 2 * m, 10 * m)}, Tr(b^33) = {trace_rel(ctx, b0 ** 33, 2 * m, 10 * m)}")

# Vectorised products run through exp/log tables once they are built.
ctx.ensure_tables()
xs = np.arange(ctx.order)
squares = ctx.vmul(xs, xs)
print("squaring is a bijection:", len(np.unique(squares)) == ctx.order)
