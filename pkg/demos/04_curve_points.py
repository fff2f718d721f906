"""
Points on the degree-16 curve H(X, Y) = 0
=========================================

For odd m, an affine point with Y != 0 gives two circle points with the
same image, so X^9 (X^(7(q-1)) + X^(3(q-1)) + 1) cannot permute GF(q^2).
"""

from ptlab.curve import bound_audit, collision_witness, curve_report, difference_identity_check, first_m_exceeding

print("identity check, m=5:", difference_identity_check(5, samples=200))

for m in (3, 5, 7, 9, 11, 13):
    rep = curve_report(m)
    print(f"m={m:2d}  projective={rep.projective_count:6d}  window=[{rep.bound_lo}, {rep.bound_hi}]  {rep.verdict}")

# A concrete collision behind the m=5 verdict
print(collision_witness(5))

# Beyond brute-force reach the bound takes over.
print(bound_audit(18))
print("first m past 2:", {p: first_m_exceeding(p) for p in ("even", "floored", "unfloored")})
