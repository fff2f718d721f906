from math import isqrt

import pytest

from ptlab.curve import (
    CHUNK_ROWS, aubry_perret_window, bound_audit, build_D, build_H, collision_witness,
    count_points, count_points_naive, curve_report,
    difference_identity_check, first_m_exceeding, roots_per_y,
)
from ptlab.family import theorem_verdict
from ptlab.gf2m import new_field
from ptlab.poly import BiPoly

A_EXPS = (8, 4, 3, 2, 1)


def test_H_on_axes():
    ctx = new_field(5)
    H = build_H(ctx)
    assert H.specialize_y(0).coeffs == tuple(1 if i in (16, 4) else 0 for i in range(17))
    assert {j for (i, j) in H.terms if i == 0} == set(A_EXPS)


def test_H_term_count_and_degree():
    ctx = new_field(3)
    H = build_H(ctx)
    assert len(H.terms) == 25
    assert H.total_degree() == 16
    assert all(c == 1 for c in H.terms.values())


def test_H_matches_manual_expansion():
    # X^16 + A X^8 + (B+1) X^4 + A X^2 + B X + A, evaluated pointwise
    ctx = new_field(6)
    H = build_H(ctx)
    pw = ctx.pow_int
    mul = ctx.mul_int
    for x in range(0, 64, 7):
        for y in range(0, 64, 5):
            a = 0
            for e in A_EXPS:
                a ^= pw(y, e)
            b = pw(y, 8) ^ pw(y, 7) ^ pw(y, 4) ^ pw(y, 2)
            want = pw(x, 16) ^ mul(a, pw(x, 8)) ^ mul(b ^ 1, pw(x, 4)) ^ mul(a, pw(x, 2)) ^ mul(b, x) ^ a
            assert H.eval_int(x, y) == want


def test_D_factors():
    ctx = new_field(4)
    D = build_D(ctx)
    assert D.eval_int(0, 0) == 1
    assert D.total_degree() == 16


@pytest.mark.parametrize("m", [3, 5, 7])
def test_difference_identity(m):
    assert difference_identity_check(m, samples=100, seed=m)


def test_difference_identity_errors():
    with pytest.raises(ValueError):
        difference_identity_check(4)
    with pytest.raises(ValueError):
        difference_identity_check(11)


FROZEN = {
    # m: (affine, affine with y != 0, projective)
    3: (2, 0, 4),
    5: (62, 60, 64),
    7: (226, 224, 228),
}


@pytest.mark.parametrize("m", sorted(FROZEN))
def test_frozen_counts(m):
    rep = curve_report(m)
    assert (rep.affine_count, rep.affine_count_y_nonzero, rep.projective_count) == FROZEN[m]
    assert rep.infinity_count == 2


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 7])
def test_counts_match_naive_grid(m):
    ctx = new_field(m)
    rep = count_points(ctx, build_H(ctx))
    assert count_points_naive(ctx, build_H(ctx)) == (rep.affine_count, rep.affine_count_y_nonzero)


def test_naive_grid_limit():
    ctx = new_field(11)
    with pytest.raises(ValueError):
        count_points_naive(ctx, build_H(ctx))


def test_roots_per_y_workers_and_limit():
    ctx = new_field(8)
    H = build_H(ctx)
    assert list(roots_per_y(ctx, H, workers=4)) == list(roots_per_y(ctx, H))
    # X^16 + X^4 = X^4 (X^3 + 1)^4: 0 and the cube roots of unity in GF(2^8)
    assert int(roots_per_y(ctx, H)[0]) == 4
    odd = new_field(5)
    assert int(roots_per_y(odd, build_H(odd))[0]) == 2
    with pytest.raises(ValueError):
        roots_per_y(new_field(21), build_H(new_field(21)))


def test_chunking_is_invisible():
    import ptlab.curve as curve
    ctx = new_field(7)
    H = build_H(ctx)
    whole = roots_per_y(ctx, H)
    old = curve.CHUNK_ROWS
    try:
        curve.CHUNK_ROWS = 13
        assert list(roots_per_y(ctx, H, workers=3)) == list(whole)
    finally:
        curve.CHUNK_ROWS = old
    assert CHUNK_ROWS == old


def test_m8_counts():
    rep = curve_report(8)
    assert (rep.affine_count, rep.affine_count_y_nonzero, rep.projective_count) == (604, 600, 606)
    assert rep.verdict == "inconclusive"  # even m: the circle argument does not apply


@pytest.mark.parametrize("m,proj", [(9, 400), (11, 1588)])
def test_frozen_projective_larger(m, proj):
    rep = curve_report(m, workers=2)
    assert rep.projective_count == proj
    assert rep.within_bound


def test_window():
    q = 1 << 5
    assert aubry_perret_window(q, 16) == (q + 1 - 210 * isqrt(q), q + 1 + 210 * isqrt(q))
    rep = curve_report(5)
    assert (rep.bound_lo, rep.bound_hi) == aubry_perret_window(q, 16)
    assert rep.within_bound
    assert rep.verdict == "not-a-permutation"
    assert list(rep.to_dict()) == ["m", "affine", "affine_y_nonzero", "infinity", "projective",
                                   "bound_lo", "bound_hi", "verdict"]


def test_m3_is_inconclusive():
    # gcd(9, q-1) = 7 is fine but no affine point with y != 0 exists
    assert curve_report(3).verdict == "inconclusive"


@pytest.mark.parametrize("m", [5, 7, 9])
def test_verdict_agrees_with_bruteforce(m):
    assert curve_report(m).verdict == "not-a-permutation"
    assert theorem_verdict("NONEXIST", m).observed is False


def test_collision_witness_m5():
    col = collision_witness(5)
    assert col is not None and col.u != col.v
    assert (col.x, col.y, col.u, col.v, col.image) == (24, 7, 456, 58, 138)
    assert collision_witness(3) is None


def test_bound_audit_values():
    a = bound_audit(18)
    assert a.value == (1 << 17) - 1 == 131071
    assert a.exact and a.exceeds_y0_roots and a.positive_unfloored
    assert bound_audit(16).value == -1
    assert not bound_audit(16).positive_unfloored
    odd = bound_audit(17)
    assert not odd.exact and odd.value == (1 << 17) - 256 * isqrt(1 << 17) - 1


def test_first_m_readings():
    assert first_m_exceeding("even") == 18
    assert first_m_exceeding("floored") == 17
    assert first_m_exceeding("unfloored") == 17
    with pytest.raises(ValueError):
        first_m_exceeding("even", limit=10)


def test_bipoly_field_guard():
    with pytest.raises(ValueError):
        count_points(new_field(21), BiPoly.constant(new_field(21)))
