"""
Factoring the difference polynomials
====================================

G(X) + G(Y) vanishes on the diagonal, so (X + Y) divides its numerator.
The remaining factors live over GF(2^k) for a root b of a small defining
polynomial; here they are multiplied back out and compared term by term.
"""

from ptlab.family import F2, difference_poly_gf2, factorization_certificate

print("F2 difference polynomial:", sorted(difference_poly_gf2(F2)))

for tid, m in (("T1", 3), ("T2", 3), ("T3", 2), ("T3", 4)):
    cert = factorization_certificate(tid, m)
    print(f"{tid} m={m}: field GF(2^{cert.field_degree}), "
          f"{len(cert.satisfying_roots)}/{cert.roots_tried} roots work, b outside GF(q^2): {cert.b_outside_base}")
