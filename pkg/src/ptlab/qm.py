"""Quasi-multiplicative equivalence of trinomials over GF(q^2).

Convention: a witness (d, A1, A2) for the ordered pair (F, G) means

    G(x) = A1 * F(A2 * x^d)   for every x in GF(q^2),

so d carries the exponents of F onto those of G: d * exps(F) = exps(G)
mod q^2 - 1.  The inverse witness gives the reverse direction.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import gcd, isqrt, lcm
from typing import Iterable

import numpy as np

from .family import TrinomialFamily, instantiate
from .gf2m import FieldCtx, new_field
from .perm import ExpPoly, is_permutation_bruteforce

EXHAUSTIVE_SCAN_LIMIT = 1 << 16


class ConjectureFailure(RuntimeError):
    """No coprime d solves the exponent system where one was promised."""


# ---------------------------------------------------------------------------
# integer utilities
# ---------------------------------------------------------------------------

def crt_solve(residues: Iterable[tuple[int, int]]) -> int:
    """Unique x mod prod(m_i) with x = a_i mod m_i; moduli pairwise coprime."""
    residues = [(a % m, m) for a, m in residues]
    for (_, m1), (_, m2) in itertools.combinations(residues, 2):
        if gcd(m1, m2) != 1:
            raise ValueError(f"moduli {m1} and {m2} are not coprime")
    x, big = 0, 1
    for a, m in residues:
        big *= m
    for a, m in residues:
        nm = big // m
        x += a * nm * pow(nm, -1, m)
    return x % big


def crt_merge(residues: Iterable[tuple[int, int] | None]) -> tuple[int, int] | None:
    """Combine congruences with arbitrary moduli; None when inconsistent."""
    x, mod = 0, 1
    for item in residues:
        if item is None:
            return None
        a, m = item
        g = gcd(mod, m)
        if (a - x) % g:
            return None
        t = ((a - x) // g) * pow(mod // g, -1, m // g) % (m // g)
        x += mod * t
        mod = lcm(mod, m)
        x %= mod
    return x, mod


def solve_linear(a: int, b: int, n: int) -> list[int]:
    """Every d in [0, n) with a*d = b (mod n)."""
    a %= n
    b %= n
    g = gcd(a, n)
    if b % g:
        return []
    n0 = n // g
    d0 = (b // g) * pow(a // g, -1, n0) % n0 if n0 > 1 else 0
    return [d0 + k * n0 for k in range(g)]


def units(n: int) -> np.ndarray:
    d = np.arange(1, n, dtype=np.int64)
    return d[np.gcd(d, n) == 1]


# ---------------------------------------------------------------------------
# screens and exponent matching
# ---------------------------------------------------------------------------

def lemma61_screen(fam: TrinomialFamily, m: int) -> bool:
    """True when a common factor of (a, b, r, q+1) rules F out as a PP."""
    q1 = (1 << m) + 1
    return gcd(gcd(fam.alpha, fam.beta), gcd(fam.r, q1)) != 1


def _support(f: ExpPoly) -> list[int]:
    return list(f.exponents)


def _step1_congruence(F: ExpPoly, G: ExpPoly) -> list[int]:
    n = F.ctx.order - 1
    ef, eg = _support(F), _support(G)
    if len(ef) != len(eg):
        return []
    found: set[int] = set()
    for perm in itertools.permutations(eg):
        cand: set[int] | None = None
        for e, t in zip(ef, perm):
            sols = set(solve_linear(e, t, n))
            cand = sols if cand is None else cand & sols
            if not cand:
                break
        if cand:
            found |= {d for d in cand if gcd(d, n) == 1 and d >= 1}
    if not ef:
        found = {int(d) for d in units(n)} if n > 1 else {1}
    return sorted(found)


def _scan_chunk(ef: list[int], target: np.ndarray, ds: np.ndarray, n: int) -> np.ndarray:
    ok = np.ones(len(ds), dtype=bool)
    for e in ef:
        ok &= np.isin((ds * e) % n, target)
    return ds[ok]


def exhaustive_d_scan(F: ExpPoly, G: ExpPoly, workers: int = 1) -> list[int]:
    """Every unit d with d * exps(F) = exps(G), by trying all units."""
    n = F.ctx.order - 1
    ef, eg = _support(F), _support(G)
    if len(ef) != len(eg):
        return []
    ds = units(n) if n > 1 else np.array([1], dtype=np.int64)
    target = np.array(sorted(eg), dtype=np.int64)
    parts = np.array_split(ds, max(1, workers))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            hits = list(pool.map(lambda c: _scan_chunk(ef, target, c, n), parts))
    else:
        hits = [_scan_chunk(ef, target, c, n) for c in parts]
    # d is a unit, so the image has |ef| distinct members and equals the target
    return sorted(int(d) for d in np.concatenate(hits))


def step1_exponent_match(F: ExpPoly, G: ExpPoly, q: int | None = None,
                         cross_check: bool = True) -> list[int]:
    """Units d with d * exps(F) = exps(G) as sets mod q^2 - 1."""
    if F.ctx != G.ctx:
        raise ValueError("F and G live in different fields")
    if q is not None and q * q != F.ctx.order:
        raise ValueError(f"q={q} does not match GF({F.ctx.order})")
    found = _step1_congruence(F, G)
    if cross_check and F.ctx.order - 1 <= EXHAUSTIVE_SCAN_LIMIT:
        scanned = exhaustive_d_scan(F, G)
        if scanned != found:
            raise RuntimeError(f"congruence solver {found} disagrees with scan {scanned}")
    return found


def step2_coefficient_solve(F: ExpPoly, G: ExpPoly, d: int) -> tuple[int, int] | None:
    """(A1, A2) with coeff_G(d e) = A1 A2^e coeff_F(e) for every e, or None.

    A2 runs over g^k for all k at once; the condition is linear in k in
    the log domain, so no discrete log of A2 is ever taken.
    """
    ctx = F.ctx.ensure_tables()
    n = ctx.order - 1
    ef = _support(F)
    mapped = sorted((d * e) % n for e in ef)
    if gcd(d, n) != 1 or mapped != sorted(_support(G)):
        raise ValueError(f"d={d} is not a step-1 match")
    log = ctx.log_table
    if not ef:
        if G.zero_maps_to != 0 and F.zero_maps_to == 0:
            return None
        return (ctx.one.bits, ctx.one.bits) if G.zero_maps_to == F.zero_maps_to else None
    k = np.arange(n, dtype=np.int64)
    e0 = ef[0]
    base = int(log[G.coefficient(d * e0)]) - int(log[F.coefficient(e0)])
    la1 = (base - k * e0) % n
    ok = np.ones(n, dtype=bool)
    for e in ef[1:]:
        rhs = int(log[G.coefficient(d * e)]) - int(log[F.coefficient(e)])
        ok &= (k * (e - e0)) % n == (rhs - base) % n
    hits = np.flatnonzero(ok)
    for kk in hits:
        a1 = int(ctx.exp_table[la1[kk]])
        if ctx.mul_int(a1, F.zero_maps_to) != G.zero_maps_to:
            continue
        return a1, int(ctx.exp_table[kk])
    return None


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QMWitness:
    d: int
    A1: int
    A2: int

    def apply(self, F: ExpPoly) -> np.ndarray:
        """A1 * F(A2 * x^d) at x = g^k for all k, then x = 0 last."""
        ctx = F.ctx.ensure_tables()
        n = ctx.order - 1
        k = np.arange(n, dtype=np.int64)
        la2 = int(ctx.log_table[self.A2])
        vals = ctx.vmul(F.values_at_logs((k * self.d + la2) % n), self.A1)
        return np.append(vals, ctx.mul_int(self.A1, F.zero_maps_to))

    def verify(self, F: ExpPoly, G: ExpPoly) -> bool:
        ctx = F.ctx
        n = ctx.order - 1
        if gcd(self.d, n) != 1 or self.A1 == 0 or self.A2 == 0:
            return False
        want = np.append(G.values_by_log(), G.zero_maps_to)
        return bool(np.array_equal(self.apply(F), want))

    def inverse(self, ctx: FieldCtx) -> QMWitness:
        """Witness for (G, F): F(y) = A1^-1 G(A2^(-d') y^d') with d' = d^-1."""
        n = ctx.order - 1
        di = pow(self.d, -1, n) if n > 1 else 1
        return QMWitness(di, ctx.inv_int(self.A1), ctx.pow_int(ctx.inv_int(self.A2), di))

    def then(self, other: QMWitness, ctx: FieldCtx) -> QMWitness:
        """Compose: self takes F to G, other takes G to H; result takes F to H."""
        n = ctx.order - 1
        # H(x) = B1 G(B2 x^e) = B1 A1 F(A2 (B2 x^e)^d)
        return QMWitness((self.d * other.d) % n or 1,
                         ctx.mul_int(other.A1, self.A1),
                         ctx.mul_int(self.A2, ctx.pow_int(other.A2, self.d)))

    def to_dict(self) -> dict:
        return {"d": self.d, "A1": f"{self.A1:#x}", "A2": f"{self.A2:#x}"}


def qm_equivalent(F: ExpPoly, G: ExpPoly, check_pp: bool = True) -> QMWitness | None:
    """First pointwise-verified witness taking F to G, or None."""
    if F.ctx != G.ctx:
        raise ValueError("F and G live in different fields")
    ctx = F.ctx
    if check_pp and not (is_permutation_bruteforce(ctx, F) and is_permutation_bruteforce(ctx, G)):
        raise ValueError("QM equivalence is only defined between permutations")
    for d in step1_exponent_match(F, G):
        coeffs = step2_coefficient_solve(F, G, d)
        if coeffs is None:
            continue
        w = QMWitness(d, *coeffs)
        if not w.verify(F, G):
            raise RuntimeError(f"step-2 solution {w} fails pointwise")
        return w
    return None


def exhaustive_witness(F: ExpPoly, G: ExpPoly) -> QMWitness | None:
    """Brute-force search over every (d, A2) with A1 forced; small fields only."""
    ctx = F.ctx.ensure_tables()
    n = ctx.order - 1
    if ctx.order > 1 << 10:
        raise ValueError("exhaustive witness search is limited to 2^10 elements")
    want = np.append(G.values_by_log(), G.zero_maps_to)
    for d in (units(n) if n > 1 else [1]):
        for a2 in range(1, ctx.order):
            base = QMWitness(int(d), 1, a2).apply(F)
            # A1 is pinned by x = 1 unless F(A2) = 0
            if base[0] == 0:
                cands = range(1, ctx.order)
            else:
                cands = [ctx.mul_int(int(want[0]), ctx.inv_int(int(base[0])))]
            for a1 in cands:
                if a1 and np.array_equal(ctx.vmul(base, a1), want):
                    return QMWitness(int(d), a1, a2)
    return None


@dataclass
class PairReport:
    F: str
    G: str
    m: int
    equivalent: bool
    witness: QMWitness | None
    step1: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = {"F": self.F, "G": self.G, "m": self.m, "equivalent": self.equivalent,
             "d": None, "A1": None, "A2": None, "step1_matches": self.step1}
        if self.witness is not None:
            d.update(self.witness.to_dict())
        return d


def classify_pair(name_f: str, F: ExpPoly, name_g: str, G: ExpPoly, m: int) -> PairReport:
    """Witness or certificate of inequivalence (empty step 1 or exhausted step 2)."""
    w = qm_equivalent(F, G)
    return PairReport(name_f, name_g, m, w is not None, w, step1_exponent_match(F, G))


# ---------------------------------------------------------------------------
# small fields
# ---------------------------------------------------------------------------

TAG_X = "X"
TAG_X3 = "X(X^2+X+1)"
TAG_NONTRIVIAL = "nontrivial"


def lemma42_classify(fam: TrinomialFamily, m: int) -> str:
    a, b = fam.alpha, fam.beta
    prod = a * b * (a - b)
    if m == 1:
        return TAG_X if prod % 3 == 0 else TAG_X3
    if m == 2:
        return TAG_X if prod % 5 == 0 else TAG_NONTRIVIAL
    raise ValueError("small-field classification covers m = 1 and m = 2 only")


def tag_representative(tag: str, ctx: FieldCtx) -> ExpPoly | None:
    if tag == TAG_X:
        return ExpPoly.from_exponents(ctx, [1])
    if tag == TAG_X3:
        return ExpPoly.from_exponents(ctx, [1, 2, 3])
    return None


def lemma42_crosscheck(fam: TrinomialFamily, m: int) -> bool | None:
    """Does the explicit witness search agree with the tag?  None if F is not a PP."""
    ctx = new_field(2 * m)
    F = instantiate(fam, m, ctx)
    if not is_permutation_bruteforce(ctx, F):
        return None
    tag = lemma42_classify(fam, m)
    has_x = exhaustive_witness(F, ExpPoly.from_exponents(ctx, [1])) is not None
    if tag == TAG_X:
        return has_x
    rep = tag_representative(tag, ctx)
    if rep is None:
        return not has_x
    return exhaustive_witness(F, rep) is not None and not has_x


# ---------------------------------------------------------------------------
# the reversed-trinomial witness
# ---------------------------------------------------------------------------

def partner_poly(fam: TrinomialFamily, m: int, ctx: FieldCtx | None = None) -> ExpPoly:
    """X^(2a-r) (X^(a(q-1)) + X^((a-b)(q-1)) + 1)."""
    ctx = ctx if ctx is not None else new_field(2 * m)
    q = 1 << m
    s = 2 * fam.alpha - fam.r
    return ExpPoly.from_exponents(ctx, [s, s + fam.alpha * (q - 1), s + (fam.alpha - fam.beta) * (q - 1)])


def partner_congruences(r: int, alpha: int, beta: int, q: int, d: int,
                   as_printed: bool = False) -> tuple[bool, bool, bool]:
    """The three congruences pairing d*exps(F) with exps(partner).

    ``as_printed`` uses a - r in the middle line instead of 2a - r.
    """
    n = q * q - 1
    s = (alpha if as_printed else 2 * alpha) - r
    return (
        (r * d + alpha * (q - 1) * d - (2 * alpha - r)) % n == 0,
        (r * d + beta * (q - 1) * d - (s + (alpha - beta) * (q - 1))) % n == 0,
        (r * d - (2 * alpha - r + alpha * (q - 1))) % n == 0,
    )


def closed_form_d(r: int, alpha: int, m: int) -> int:
    """-q^2 + 2^(m-1) a r^-1 (q+1)^2 mod q^2 - 1, with r^-1 taken mod q - 1."""
    q = 1 << m
    n = q * q - 1
    rinv = pow(r, -1, q - 1) if q > 2 else 0
    return (-q * q + (1 << (m - 1)) * alpha * rinv * (q + 1) ** 2) % n


@dataclass
class ConjectureResult:
    witness: QMWitness
    solutions: list[int]
    closed_form: int | None
    closed_form_agrees: bool | None


def conjecture_solve(fam: TrinomialFamily, m: int) -> ConjectureResult:
    ctx = new_field(2 * m)
    q = 1 << m
    n = q * q - 1
    F = instantiate(fam, m, ctx)
    G = partner_poly(fam, m, ctx)
    if not (is_permutation_bruteforce(ctx, F) and is_permutation_bruteforce(ctx, G)):
        raise ValueError(f"{fam} or its partner does not permute GF(2^{2 * m})")
    cands = [d for d in solve_linear(fam.r, fam.alpha * (q + 1) - fam.r, n)
             if d >= 1 and gcd(d, n) == 1]
    good = [d for d in cands if all(partner_congruences(fam.r, fam.alpha, fam.beta, q, d))
            and QMWitness(d, 1, 1).verify(F, G)]
    if not good:
        raise ConjectureFailure(f"no coprime d for {fam} at m={m} (candidates {cands})")
    cf = closed_form_d(fam.r, fam.alpha, m) if gcd(fam.r, q - 1) == 1 else None
    # the closed form is only pinned modulo n when it lands on a verified solution
    agrees = None if cf is None else cf in good
    chosen = cf if agrees else good[0]
    return ConjectureResult(QMWitness(chosen, 1, 1), good, cf, agrees)


def conjecture_witness(fam: TrinomialFamily, m: int) -> QMWitness:
    """Verified witness taking F to its partner with A1 = A2 = 1."""
    return conjecture_solve(fam, m).witness


# ---------------------------------------------------------------------------
# integer audit of the exponent argument, any prime power q
# ---------------------------------------------------------------------------

@dataclass
class CongruenceAudit:
    r: int
    alpha: int
    beta: int
    q: int
    branch: str
    case: str
    d: int | None = None
    modulus: int | None = None
    coprime: bool | None = None
    congruences: tuple[bool, bool, bool] | None = None
    congruences_as_printed: tuple[bool, bool, bool] | None = None
    discarded_divisors: dict[str, bool] = field(default_factory=dict)
    other_bijections: list[list[int]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.d is not None and bool(self.congruences) and all(self.congruences)

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["consistent"] = self.consistent
        return out


def _v2(x: int) -> int:
    return (x & -x).bit_length() - 1


def _is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = next((p for p in range(2, isqrt(q) + 1) if q % p == 0), q)
    while q % p == 0:
        q //= p
    return q == 1


def integer_congruence_audit(r: int, alpha: int, beta: int, q: int) -> CongruenceAudit:
    if not _is_prime_power(q):
        raise ValueError(f"q={q} is not a prime power")
    n = q * q - 1
    etas = (alpha, beta, r)
    gs = [gcd(e, q + 1) for e in etas]
    even = q % 2 == 0
    audit = CongruenceAudit(r, alpha, beta, q, "even" if even else "odd", "")
    audit.notes.append("middle congruence checked as 2a-r+(a-b)(q-1); the printed a-r form is reported separately")

    big = q + 1
    audit.discarded_divisors = {
        "2ab-ar": (2 * alpha * beta - alpha * r) % big == 0,
        "a^2+b^2-ab": (alpha ** 2 + beta ** 2 - alpha * beta) % big == 0,
        "a^2-b^2": (alpha ** 2 - beta ** 2) % big == 0,
        "b^2-2ab": (beta ** 2 - 2 * alpha * beta) % big == 0,
    }
    src = [r, r + alpha * (q - 1), r + beta * (q - 1)]
    s = 2 * alpha - r
    dst = [s + alpha * (q - 1), s + (alpha - beta) * (q - 1), s]
    for perm in itertools.permutations(range(3)):
        if perm == (1, 2, 0):
            continue  # the retained case
        sols: set[int] | None = None
        for i, j in enumerate(perm):
            got = set(solve_linear(src[i], dst[j], n))
            sols = got if sols is None else sols & got
        audit.other_bijections.append(sorted(d for d in sols if gcd(d, n) == 1))

    if 1 not in gs and gcd(gcd(gs[0], gs[1]), gs[2]) != 1:
        audit.case = "2b"
        audit.notes.append("common-factor contradiction: gcd(a, b, r, q+1) != 1, F cannot permute")
        return audit

    if even:
        if gcd(r, q - 1) != 1:
            audit.case = "r-not-invertible"
            audit.notes.append("gcd(r, q-1) != 1, F cannot permute")
            return audit
        tail = (alpha * (q + 1) * pow(r, -1, q - 1) - 1, q - 1)
        if 1 in gs:
            audit.case = "1"
            systems = [[(-1, q + 1), tail]]
        else:
            audit.case = "2a"
            systems = [[(-1, (q + 1) // g), tail] for g in gs]
        merged = crt_merge(crt_merge(sys) for sys in systems)
    else:
        if gcd(r, q - 1) != 1:
            audit.case = "r-not-invertible"
            audit.notes.append("gcd(r, q-1) != 1, F cannot permute")
            return audit
        k = _v2(q + 1)
        sinv = pow(r, -1, (1 << k) * (q - 1))
        head = (alpha * (q + 1) * sinv - 1, (1 << k) * (q - 1))
        half = (alpha * (q + 1) * sinv - 1, (q - 1) // 2)
        if 1 in gs:
            audit.case = "1"
            parts = [crt_merge([(-1, (q + 1) // 2), half])]
        else:
            audit.case = "2a"
            odd = [g >> _v2(g) for g in gs]
            parts = [crt_merge([(-1, (q + 1) // (2 * o)), half]) for o in odd]
        merged = crt_merge(parts + [head])

    if merged is None:
        audit.notes.append("CRT system inconsistent")
        return audit
    d, mod = merged
    audit.d, audit.modulus = d % n, mod
    if mod != n:
        audit.notes.append(f"CRT only pins d modulo {mod}, not q^2-1")
    audit.coprime = gcd(audit.d, n) == 1
    audit.congruences = partner_congruences(r, alpha, beta, q, audit.d)
    audit.congruences_as_printed = partner_congruences(r, alpha, beta, q, audit.d, as_printed=True)
    return audit
