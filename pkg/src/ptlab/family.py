"""The trinomial family X^r (X^(a(q-1)) + X^(b(q-1)) + 1) over GF(2^(2m)).

Covers instantiation, root exclusion on the unit circle, the difference
polynomial whose factors decide injectivity, the theorem verdicts checked
by brute force, and the trace and factorization certificates.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from math import gcd

from .circle import CircleCtx
from .gf2m import Elem, FieldCtx, mult_order, new_field, trace_rel
from .perm import ExpPoly, circle_image_order, is_permutation_bruteforce
from .poly import BiPoly, UniPoly, expand_product, roots_in_field


@dataclass(frozen=True)
class TrinomialFamily:
    r: int
    alpha: int
    beta: int

    def __post_init__(self):
        if not (self.alpha > self.beta >= 1 and self.r >= 1):
            raise ValueError(f"need alpha > beta >= 1 and r >= 1, got {self}")

    @property
    def h_exps(self) -> tuple[int, int, int]:
        return (0, self.beta, self.alpha)

    def h_poly(self, ctx: FieldCtx) -> UniPoly:
        return UniPoly.from_exponents(ctx, self.h_exps)

    def partner(self) -> tuple[int, int, int]:
        """(2a - r, a, a - b): the companion of the QM-equivalence theorem."""
        return (2 * self.alpha - self.r, self.alpha, self.alpha - self.beta)


F1 = TrinomialFamily(11, 10, 4)
F2 = TrinomialFamily(9, 8, 6)
F3 = TrinomialFamily(7, 7, 5)
NONEXIST = TrinomialFamily(9, 7, 3)

FAMILIES = {"T1": F1, "T2": F2, "T3": F3, "NONEXIST": NONEXIST}


def predicted(theorem_id: str, m: int) -> bool | None:
    if theorem_id == "T1":
        return m % 5 != 0
    if theorem_id == "T2":
        return m % 2 == 1
    if theorem_id == "T3":
        return m % 2 == 0 and m % 3 != 0
    if theorem_id == "NONEXIST":
        return False if m > 3 else None
    raise ValueError(f"unknown theorem {theorem_id!r}")


def instantiate(fam: TrinomialFamily, m: int, ctx: FieldCtx | None = None) -> ExpPoly:
    """F as an ExpPoly over GF(2^(2m)); colliding exponents cancel in pairs."""
    if m < 1:
        raise ValueError("m must be positive")
    ctx = ctx if ctx is not None else new_field(2 * m)
    q = 1 << m
    return ExpPoly.from_exponents(ctx, [fam.r, fam.r + fam.alpha * (q - 1), fam.r + fam.beta * (q - 1)])


@dataclass(frozen=True)
class RootExclusion:
    holds: bool
    condition: int | None
    conditions: tuple[int, ...] = ()

    def __bool__(self):
        return self.holds


def no_roots_on_circle(fam: TrinomialFamily, m: int) -> RootExclusion:
    """Which gcd conditions (1-4) guarantee h has no roots on mu_{q+1}.

    ``condition`` is the first that fires, ``conditions`` all of them.

    A False result only means none of the sufficient conditions fired.
    """
    q1 = (1 << m) + 1
    a, b = fam.alpha, fam.beta
    fired = tuple(idx for idx, v in enumerate((a + b, abs(a - 2 * b), 2 * a - b, 3), start=1)
                  if gcd(v, q1) == 1)
    return RootExclusion(bool(fired), fired[0] if fired else None, fired)


def _gf2_poly(exps) -> dict[int, int]:
    out: dict[int, int] = {}
    for e in exps:
        out[e] = out.get(e, 0) ^ 1
    return {e: 1 for e, c in out.items() if c}


def circle_fraction(fam: TrinomialFamily) -> tuple[dict[int, int], dict[int, int]]:
    """Numerator and denominator of X^r h(X)^(q-1) restricted to the circle.

    On mu_{q+1}, h(X)^q = h(1/X), so the map is X^(r - deg h) h_rev(X) / h(X).
    Polynomials are returned as {exponent: 1} over GF(2).
    """
    d = fam.alpha
    rev = [d - e for e in fam.h_exps]
    shift_n = max(0, fam.r - d)
    shift_d = max(0, d - fam.r)
    num = _gf2_poly(e + shift_n for e in rev)
    den = _gf2_poly(e + shift_d for e in fam.h_exps)
    return num, den


def difference_poly_gf2(fam: TrinomialFamily) -> set[tuple[int, int]]:
    """Monomials of N(X)D(Y) + N(Y)D(X) over GF(2)."""
    num, den = circle_fraction(fam)
    monos: dict[tuple[int, int], int] = {}
    for i in num:
        for j in den:
            for key in ((i, j), (j, i)):
                monos[key] = monos.get(key, 0) ^ 1
    return {k for k, c in monos.items() if c}


def difference_poly(fam: TrinomialFamily, m: int, ctx: FieldCtx | None = None) -> BiPoly:
    excl = no_roots_on_circle(fam, m)
    if not excl:
        raise ValueError(f"no root-exclusion condition holds for {fam} at m={m}")
    ctx = ctx if ctx is not None else new_field(2 * m)
    return BiPoly.from_monomials(ctx, difference_poly_gf2(fam))


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------

@dataclass
class TheoremVerdict:
    theorem_id: str
    m: int
    predicted: bool | None
    observed: bool
    agree: bool | None = field(init=False)
    elapsed_ms: float = 0.0

    def __post_init__(self):
        self.agree = None if self.predicted is None else self.predicted == self.observed

    def to_dict(self, timing: bool = True) -> dict:
        d = {"theorem": self.theorem_id, "m": self.m, "predicted": self.predicted,
             "observed": self.observed, "agree": self.agree}
        if timing:
            d["elapsed_ms"] = round(self.elapsed_ms, 3)
        return d


def theorem_verdict(theorem_id: str, m: int, workers: int = 1) -> TheoremVerdict:
    fam = FAMILIES[theorem_id]
    t0 = time.perf_counter()
    ctx = new_field(2 * m)
    observed = is_permutation_bruteforce(ctx, instantiate(fam, m, ctx), workers=workers)
    elapsed = (time.perf_counter() - t0) * 1000
    return TheoremVerdict(theorem_id, m, predicted(theorem_id, m), observed, elapsed)


def t1_converse_orders(m: int) -> list[int | None]:
    """Orders of G_1(u) for u in mu_11, when 11 | q + 1."""
    circle = CircleCtx(m)
    if (circle.q + 1) % 11:
        raise ValueError("mu_11 is not inside mu_{q+1} for this m")
    big = circle.big
    h = F1.h_poly(big)
    step = (circle.q + 1) // 11
    pts = [int(circle.circle_array[k * step]) for k in range(11)]
    return [circle_image_order(circle, F1.r, h, u) for u in pts]


def t3_converse_root(m: int) -> Elem:
    """An element of order 3(q - 1) that F3 sends to 0 (m odd, 3 not dividing m)."""
    if m % 2 == 0:
        raise ValueError("the order-3(q-1) argument needs m odd")
    ctx = new_field(2 * m)
    q = 1 << m
    a = Elem(ctx, ctx.pow_int(ctx.generator, (q + 1) // 3))
    assert mult_order(ctx, a) == 3 * (q - 1)
    return a


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

TRACE_ROOT_POLY = (10, 6, 5, 3, 2, 1, 0)
T2_B_POLY = (4, 3, 0)
T3_B_POLY = (6, 4, 3, 1, 0)


@dataclass
class TraceRootReport:
    b: int
    trace_b: int
    trace_b33: int
    order: int


@dataclass
class TraceCertificate:
    m: int
    roots: list[TraceRootReport]

    @property
    def all_zero(self) -> bool:
        return all(r.trace_b == 0 and r.trace_b33 == 0 for r in self.roots)


def trace_certificate(m: int) -> TraceCertificate:
    """Relative traces GF(2^(10m)) -> GF(2^(2m)) of b and b^33 for every root b."""
    if gcd(5, m) != 1:
        raise ValueError("needs gcd(5, m) = 1")
    ctx = new_field(10)
    roots = roots_in_field(ctx, UniPoly.from_exponents(ctx, TRACE_ROOT_POLY))
    out = []
    for b in roots:
        out.append(TraceRootReport(
            b=b.bits,
            trace_b=trace_rel(ctx, b, 2 * m, 10 * m).bits,
            trace_b33=trace_rel(ctx, b ** 33, 2 * m, 10 * m).bits,
            order=mult_order(ctx, b),
        ))
    return TraceCertificate(m, out)


def t2_trace_check(m: int) -> list[bool]:
    """Per root b of X^4+X^3+1: does Tr from GF(2^(4m)) to GF(2^(2m)) of b equal b^5?"""
    ctx = new_field(4)
    roots = roots_in_field(ctx, UniPoly.from_exponents(ctx, T2_B_POLY))
    return [trace_rel(ctx, b, 2 * m, 4 * m) == b ** 5 for b in roots]


def _quartic(ctx: FieldCtx, sq: int, mixed: int) -> BiPoly:
    # X^2 Y^2 + sq (X^2 + Y^2) + mixed XY + 1
    return BiPoly(ctx, {(2, 2): 1, (2, 0): sq, (0, 2): sq, (1, 1): mixed, (0, 0): 1})


def theorem_factors(theorem_id: str, ctx: FieldCtx, b: int) -> list[BiPoly]:
    """Factors (X + Y) f_1 ... f_k for root ``b`` of the defining polynomial."""
    pw = ctx.pow_int
    xy = BiPoly.from_monomials(ctx, [(1, 0), (0, 1)])
    if theorem_id == "T1":
        e = [33, 66, 132, 264, 528]
        fs = [_quartic(ctx, pw(b, e[i]), pw(b, e[i - 1])) for i in range(5)]
    elif theorem_id == "T2":
        fs = [_quartic(ctx, pw(b, 2 ** (i - 1)), pw(b, 2 ** (i + 2))) for i in range(1, 5)]
    elif theorem_id == "T3":
        fs = [BiPoly(ctx, {(0, 1): 1, (0, 0): pw(b, 21 * i)}) for i in (1, 2)]
        fs += [BiPoly(ctx, {(1, 0): 1, (0, 0): pw(b, 21 * (i - 2))}) for i in (3, 4)]
        fs.append(BiPoly.from_monomials(ctx, [(2, 1), (1, 2), (1, 0), (0, 1), (0, 0)]))
        fs.append(BiPoly.from_monomials(ctx, [(2, 2), (2, 1), (1, 2), (1, 0), (0, 1)]))
    else:
        raise ValueError(f"no factorization for {theorem_id!r}")
    return [xy] + fs


FACTOR_FIELDS = {"T1": (10, TRACE_ROOT_POLY), "T2": (4, T2_B_POLY), "T3": (6, T3_B_POLY)}


@dataclass
class FactorizationCertificate:
    theorem_id: str
    m: int
    applicable: bool
    field_degree: int
    roots_tried: int
    satisfying_roots: list[int]
    b_outside_base: bool

    @property
    def holds(self) -> bool:
        return bool(self.satisfying_roots)

    @property
    def chosen_root(self) -> int | None:
        return min(self.satisfying_roots) if self.satisfying_roots else None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["holds"] = self.holds
        d["chosen_root"] = self.chosen_root
        return d


def factorization_certificate(theorem_id: str, m: int) -> FactorizationCertificate:
    """Check (X+Y) prod f_i == difference polynomial for some root b.

    The identity lives in GF(2^k)[X, Y] where k is the degree of b's
    defining polynomial; ``b_outside_base`` records that b is not in
    GF(2^(2m)), i.e. k does not divide 2m.
    """
    k, defining = FACTOR_FIELDS[theorem_id]
    ctx = new_field(k)
    target = BiPoly.from_monomials(ctx, difference_poly_gf2(FAMILIES[theorem_id]))
    roots = roots_in_field(ctx, UniPoly.from_exponents(ctx, defining))
    good = [b.bits for b in roots
            if expand_product(ctx, theorem_factors(theorem_id, ctx, b.bits)) == target]
    return FactorizationCertificate(
        theorem_id=theorem_id, m=m, applicable=bool(predicted(theorem_id, m)),
        field_degree=k, roots_tried=len(roots), satisfying_roots=good,
        b_outside_base=(2 * m) % k != 0,
    )
