"""Point counts on the degree-16 curve H(X, Y) = 0 over GF(q).

For odd m, X^9 (X^(7(q-1)) + X^(3(q-1)) + 1) permutes GF(q^2) exactly when
phi^-1 G phi permutes GF(q), and that fails as soon as H has an affine
point with Y != 0.  Counting is per Y: the number of roots of H(X, y) in
GF(q) is deg gcd(H(X, y), X^q - X).
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

from .circle import CircleCtx, phi, phi_inv
from .gf2m import FieldCtx, new_field
from .poly import BiPoly, UniPoly, count_roots_batch, infinity_points, roots_in_field

MAX_CURVE_DEGREE = 20
CHUNK_ROWS = 1 << 15

# A = Y^8+Y^4+Y^3+Y^2+Y, B = Y^8+Y^7+Y^4+Y^2
_A = (8, 4, 3, 2, 1)
_B = (8, 7, 4, 2)


def _h_monomials() -> set[tuple[int, int]]:
    monos: dict[tuple[int, int], int] = {(16, 0): 1, (4, 0): 1}
    for xe in (8, 2, 0):
        for ye in _A:
            monos[(xe, ye)] = monos.get((xe, ye), 0) ^ 1
    for xe in (4, 1):
        for ye in _B:
            monos[(xe, ye)] = monos.get((xe, ye), 0) ^ 1
    return {k for k, c in monos.items() if c}


def build_H(ctx: FieldCtx) -> BiPoly:
    """X^16 + A X^8 + (B+1) X^4 + A X^2 + B X + A."""
    return BiPoly.from_monomials(ctx, _h_monomials())


def build_D(ctx: FieldCtx) -> BiPoly:
    left = BiPoly.from_monomials(ctx, [(8, 0), (4, 0), (2, 0), (1, 0), (0, 0)])
    right = BiPoly.from_monomials(ctx, [(8, 0), (0, 8), (4, 0), (0, 4), (2, 0), (0, 2),
                                        (1, 0), (0, 1), (0, 0)])
    return left * right


def _g_map(big: FieldCtx, u: int) -> int:
    """(u^9 + u^6 + u^2) / (u^7 + u^3 + 1)."""
    pw, mul = big.pow_int, big.mul_int
    num = pw(u, 9) ^ pw(u, 6) ^ pw(u, 2)
    den = pw(u, 7) ^ pw(u, 3) ^ 1
    return mul(num, big.inv_int(den))


def conjugated_map(circle: CircleCtx, x: int) -> int | None:
    """phi^-1(G(phi(x))) for x in GF(q), or None at the pole of phi^-1."""
    u = _g_map(circle.big, phi(circle, x).bits)
    if u == 1:
        return None
    return phi_inv(circle, u).bits


def difference_identity_check(m: int, samples: int = 100, seed: int = 0) -> bool:
    """Two-path check of the identity linking G to y H(x, y) / D(x, y).

    The left side is computed through phi and phi^-1 in GF(q^2), the right
    side by evaluating H and D; pairs that hit a pole are redrawn.
    """
    if m % 2 == 0:
        raise ValueError("phi needs m odd")
    if m > 9:
        raise ValueError("identity check runs for m <= 9")
    circle = CircleCtx(m)
    big = circle.big
    sub = circle.subfield_array
    H, D = build_H(big), build_D(big)
    rng = random.Random(seed)
    done = tries = 0
    while done < samples:
        tries += 1
        if tries > 50 * samples:
            raise RuntimeError("too many poles while sampling")
        x, y = int(rng.choice(sub)), int(rng.choice(sub))
        dxy = D.eval_int(x, y)
        a, b = conjugated_map(circle, x ^ y), conjugated_map(circle, x)
        if dxy == 0 or a is None or b is None:
            continue
        rhs = big.mul_int(big.mul_int(y, H.eval_int(x, y)), big.inv_int(dxy))
        if a ^ b != rhs:
            return False
        done += 1
    return True


@dataclass
class CurveReport:
    m: int
    affine_count: int
    affine_count_y_nonzero: int
    infinity_count: int
    degree: int
    bound_lo: int
    bound_hi: int
    verdict: str

    @property
    def projective_count(self) -> int:
        return self.affine_count + self.infinity_count

    @property
    def within_bound(self) -> bool:
        return self.bound_lo <= self.projective_count <= self.bound_hi

    def to_dict(self) -> dict:
        return {"m": self.m, "affine": self.affine_count,
                "affine_y_nonzero": self.affine_count_y_nonzero,
                "infinity": self.infinity_count, "projective": self.projective_count,
                "bound_lo": self.bound_lo, "bound_hi": self.bound_hi,
                "verdict": self.verdict}


def _count_chunk(ctx: FieldCtx, p: BiPoly, ys: np.ndarray) -> np.ndarray:
    return count_roots_batch(ctx, p.x_coefficients(ys))


def roots_per_y(ctx: FieldCtx, p: BiPoly, workers: int = 1) -> np.ndarray:
    """Distinct X-roots of p(X, y) for every y, indexed by the coordinate of y."""
    if ctx.n > MAX_CURVE_DEGREE:
        raise ValueError(f"point counting limited to q <= 2^{MAX_CURVE_DEGREE}")
    ctx.ensure_tables()
    ys = np.arange(ctx.order, dtype=np.int64)
    chunks = [ys[i:i + CHUNK_ROWS] for i in range(0, ctx.order, CHUNK_ROWS)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda c: _count_chunk(ctx, p, c), chunks))
    else:
        parts = [_count_chunk(ctx, p, c) for c in chunks]
    return np.concatenate(parts)


def aubry_perret_window(q: int, degree: int) -> tuple[int, int]:
    slack = (degree - 1) * (degree - 2) * isqrt(q)
    return q + 1 - slack, q + 1 + slack


def count_points(ctx: FieldCtx, p: BiPoly, workers: int = 1) -> CurveReport:
    per_y = roots_per_y(ctx, p, workers)
    affine = int(per_y.sum())
    y_nonzero = affine - int(per_y[0])
    inf = len(infinity_points(ctx, p))
    deg = p.total_degree()
    lo, hi = aubry_perret_window(ctx.order, deg)
    m = ctx.n
    q = ctx.order
    applies = m % 2 == 1 and gcd(9, q - 1) == 1
    verdict = "not-a-permutation" if applies and y_nonzero > 0 else "inconclusive"
    return CurveReport(m, affine, y_nonzero, inf, deg, lo, hi, verdict)


def count_points_naive(ctx: FieldCtx, p: BiPoly) -> tuple[int, int]:
    """(affine, affine with y != 0) by evaluating on the whole grid."""
    if ctx.n > 10:
        raise ValueError("naive grid count limited to q <= 2^10")
    xs = np.arange(ctx.order, dtype=np.int64)
    total = y_nonzero = 0
    for y in range(ctx.order):
        hits = int(np.count_nonzero(p.eval_grid(xs, np.int64(y)) == 0))
        total += hits
        if y:
            y_nonzero += hits
    return total, y_nonzero


def curve_report(m: int, workers: int = 1) -> CurveReport:
    ctx = new_field(m)
    return count_points(ctx, build_H(ctx), workers)


@dataclass
class Collision:
    m: int
    x: int
    y: int
    u: int
    v: int
    image: int


def collision_witness(m: int) -> Collision | None:
    """Two circle points u != v with equal image under G, from a point of H.

    Uses an affine point (x, y) with y != 0 and D(x, y) != 0, so that
    phi^-1 G phi takes the same value at x and x + y.
    """
    circle = CircleCtx(m)
    small = new_field(m)
    big = circle.big
    H, D = build_H(small), build_D(small)
    per_y = roots_per_y(small, H)
    embed = _embedding(small, circle)
    for y in np.flatnonzero(per_y):
        if y == 0:
            continue
        for x in roots_in_field(small, H.specialize_y(int(y))):
            if D.eval_int(x.bits, int(y)) == 0:
                continue
            bx, by = embed[x.bits], embed[int(y)]
            a, b = conjugated_map(circle, bx ^ by), conjugated_map(circle, bx)
            if a is None or b is None:
                continue
            u, v = phi(circle, bx ^ by).bits, phi(circle, bx).bits
            gu = _g_map(big, u)
            if gu == _g_map(big, v) and u != v:
                return Collision(m, x.bits, int(y), u, v, gu)
    return None


def _embedding(small: FieldCtx, circle: CircleCtx) -> np.ndarray:
    """Coordinates in GF(q^2) of each element of GF(q), as a lookup table.

    Sends a root of the small modulus to a root of the same polynomial
    inside GF(q^2) and extends linearly over the polynomial basis.
    """
    big = circle.big
    mod = UniPoly(big, tuple((small.modulus >> i) & 1 for i in range(small.n + 1)))
    z = roots_in_field(big, mod)[0].bits
    basis = [big.pow_int(z, i) for i in range(small.n)]
    table = np.zeros(small.order, dtype=np.int64)
    for a in range(small.order):
        acc = 0
        for i in range(small.n):
            if (a >> i) & 1:
                acc ^= basis[i]
        table[a] = acc
    return table


# ---------------------------------------------------------------------------
# the large-m bound
# ---------------------------------------------------------------------------

H_ZEROS_ON_Y0 = 2


@dataclass
class BoundAudit:
    m: int
    value: int
    exact: bool
    positive_unfloored: bool
    exceeds_y0_roots: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def bound_audit(m: int) -> BoundAudit:
    """2^(8+m/2) (2^(m/2-8) - 1) - 1, i.e. q - 256 sqrt(q) - 1.

    Even m is exact.  Odd m uses floor(sqrt(q)) for the integer value;
    ``positive_unfloored`` decides q - 1 > 256 sqrt(q) without rounding.
    """
    q = 1 << m
    root = isqrt(q)
    value = q - 256 * root - 1
    positive = q - 1 > 0 and (q - 1) ** 2 > 65536 * q
    return BoundAudit(m, value, root * root == q, positive, value > H_ZEROS_ON_Y0)


def first_m_exceeding(parity: str = "even", limit: int = 64) -> int:
    """Smallest m whose audited bound exceeds the y = 0 root count.

    ``parity`` is "even" (the exact chain), "floored" (every m, integer
    sqrt), or "unfloored" (every m, exact comparison).
    """
    for m in range(1, limit + 1):
        a = bound_audit(m)
        if parity == "even" and m % 2 == 0 and a.exceeds_y0_roots:
            return m
        if parity == "floored" and a.exceeds_y0_roots:
            return m
        if parity == "unfloored" and a.positive_unfloored:
            q = 1 << m
            # q - 1 - 256 sqrt(q) > 2  <=>  (q - 3)^2 > 65536 q
            if (q - 3) ** 2 > 65536 * q:
                return m
    raise ValueError("no m found below limit")
