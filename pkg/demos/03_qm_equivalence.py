"""
Quasi-multiplicative equivalence
================================

G ~ F when G(x) = A1 F(A2 x^d) with gcd(d, q^2-1) = 1.  Step 1 matches
exponent sets, step 2 solves for the coefficients; every witness is
checked pointwise before it is returned.
"""

from ptlab.catalog import EQUIVALENT_PAIRS, row
from ptlab.family import F1, F2, TrinomialFamily, instantiate
from ptlab.gf2m import new_field
from ptlab.qm import conjecture_solve, lemma42_classify, qm_equivalent, step1_exponent_match

ctx = new_field(6)
f5, f6 = row(5).exp_poly(3, ctx), row(6).exp_poly(3, ctx)
print("step 1, f5 -> f6:", step1_exponent_match(f5, f6))
print("witness:", qm_equivalent(f5, f6))

# The new class F1 is not equivalent to F2 at m=3: no d survives step 1.
print("F1 vs F2:", step1_exponent_match(instantiate(F1, 3, ctx), instantiate(F2, 3, ctx)),
      qm_equivalent(instantiate(F1, 3, ctx), instantiate(F2, 3, ctx)))

# Over GF(4) and GF(16) everything collapses to a handful of classes
print("tags:", lemma42_classify(F1, 1), lemma42_classify(TrinomialFamily(1, 2, 1), 1))

# Each equivalent catalog pair maps onto its reversed partner with A1 = A2 = 1.
for i, j, rep in EQUIVALENT_PAIRS:
    for m in range(1, 9):
        if row(i).holds(m) and row(j).holds(m):
            res = conjecture_solve(TrinomialFamily(*rep(m)), m)
            print(f"f{i} ~ f{j} at m={m}: d={res.witness.d}, closed form agrees={res.closed_form_agrees}")
            break
