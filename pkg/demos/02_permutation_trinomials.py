"""
Which trinomials permute GF(q^2)?
=================================

F(X) = X^r (X^(a(q-1)) + X^(b(q-1)) + 1) with q = 2^m.  Two independent
tests: a full bijection scan, and the reduction to the unit circle
mu_{q+1} where F permutes iff gcd(r, q-1) = 1 and X^r h(X)^(q-1) is a
bijection of mu_{q+1}.
"""

from ptlab.circle import CircleCtx
from ptlab.family import F1, F2, F3, instantiate, theorem_verdict
from ptlab.perm import is_permutation_bruteforce, is_pp_via_criterion

for name, fam in (("F1", F1), ("F2", F2), ("F3", F3)):
    row = []
    for m in range(1, 9):
        circle = CircleCtx(m)
        ctx = circle.big
        brute = is_permutation_bruteforce(ctx, instantiate(fam, m, ctx))
        crit = is_pp_via_criterion(ctx, circle, fam.r, fam.h_poly(ctx))
        assert brute == crit
        row.append("P" if brute else ".")
    print(f"{name} {(fam.r, fam.alpha, fam.beta)}: m=1..8  {' '.join(row)}")

# The verdict objects compare against the stated conditions on m.
for tid, m in (("T1", 5), ("T2", 4), ("T3", 8), ("NONEXIST", 5)):
    v = theorem_verdict(tid, m)
    print(v.to_dict(timing=False))
