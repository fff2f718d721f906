"""Univariate and sparse bivariate polynomials over a :class:`FieldCtx`.

Coefficients are stored as raw int coordinates alongside the owning field;
every binary operation checks that both operands share that field.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .gf2m import Elem, FieldCtx, FieldMismatchError

EXHAUSTIVE_ROOT_DEGREE = 16
MAX_BIDEGREE = 64
MAX_UNI_DEGREE = 1 << 16


def _check_same(a: FieldCtx, b: FieldCtx) -> None:
    if a != b:
        raise FieldMismatchError(f"{a!r} vs {b!r}")


@dataclass(frozen=True)
class UniPoly:
    """Dense univariate polynomial; ``coeffs[i]`` is the coefficient of X^i."""

    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = [self.ctx.coerce(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_exponents(cls, ctx: FieldCtx, exps: Iterable[int]) -> UniPoly:
        """Sum of X^e with unit coefficients (repeats cancel)."""
        exps = list(exps)
        if any(e < 0 or e > MAX_UNI_DEGREE for e in exps):
            raise ValueError(f"exponents must lie in 0..{MAX_UNI_DEGREE}")
        c = [0] * (max(exps, default=-1) + 1)
        for e in exps:
            c[e] ^= 1
        return cls(ctx, tuple(c))

    @classmethod
    def monomial(cls, ctx: FieldCtx, e: int, coeff: int = 1) -> UniPoly:
        if not 0 <= e <= MAX_UNI_DEGREE:
            raise ValueError(f"exponent must lie in 0..{MAX_UNI_DEGREE}")
        return cls(ctx, (0,) * e + (ctx.coerce(coeff),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __add__(self, other: UniPoly) -> UniPoly:
        _check_same(self.ctx, other.ctx)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UniPoly(self.ctx, tuple(x ^ (b[i] if i < len(b) else 0) for i, x in enumerate(a)))

    __sub__ = __add__

    def __mul__(self, other: UniPoly) -> UniPoly:
        _check_same(self.ctx, other.ctx)
        if self.is_zero() or other.is_zero():
            return UniPoly(self.ctx, ())
        mul = self.ctx.mul_int
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] ^= mul(a, b)
        return UniPoly(self.ctx, tuple(out))

    def scale(self, c: int) -> UniPoly:
        mul = self.ctx.mul_int
        return UniPoly(self.ctx, tuple(mul(c, x) for x in self.coeffs))

    def monic(self) -> UniPoly:
        if self.is_zero():
            return self
        return self.scale(self.ctx.inv_int(self.lead()))

    def divmod(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        _check_same(self.ctx, other.ctx)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        mul = self.ctx.mul_int
        r = list(self.coeffs)
        d = other.degree
        inv_lead = self.ctx.inv_int(other.lead())
        q = [0] * max(len(r) - d, 0)
        for k in range(len(r) - 1, d - 1, -1):
            c = r[k]
            if c:
                c = mul(c, inv_lead)
                q[k - d] = c
                for j, b in enumerate(other.coeffs):
                    if b:
                        r[k - d + j] ^= mul(c, b)
        return UniPoly(self.ctx, tuple(q)), UniPoly(self.ctx, tuple(r[:d]))

    def __mod__(self, other: UniPoly) -> UniPoly:
        return self.divmod(other)[1]

    def __call__(self, x) -> Elem:
        return Elem(self.ctx, self.eval_int(self.ctx.coerce(x)))

    def eval_int(self, x: int) -> int:
        mul = self.ctx.mul_int
        acc = 0
        for c in reversed(self.coeffs):
            acc = mul(acc, x) ^ c
        return acc

    def eval_many(self, xs: np.ndarray) -> np.ndarray:
        """Horner evaluation at an array of coordinates."""
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.zeros_like(xs)
        for c in reversed(self.coeffs):
            acc = self.ctx.vmul(acc, xs) ^ c
        return acc

    def gcd(self, other: UniPoly) -> UniPoly:
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def powmod_frobenius(self, k: int) -> UniPoly:
        """X^(2^k) mod self."""
        r = UniPoly(self.ctx, (0, 1)) % self
        for _ in range(k):
            r = (r * r) % self
        return r

    def __repr__(self):
        terms = [f"{c:#x}*X^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"UniPoly({' + '.join(reversed(terms)) or '0'})"


def roots_in_field(ctx: FieldCtx, p: UniPoly) -> list[Elem]:
    """All roots of ``p`` in ``ctx``, ascending by bit pattern.

    Small fields are scanned exhaustively; larger ones go through
    gcd(p, X^(2^n) - X) followed by trace splitting.
    """
    _check_same(ctx, p.ctx)
    if p.is_zero():
        raise ValueError("the zero polynomial vanishes everywhere")
    if ctx.n <= EXHAUSTIVE_ROOT_DEGREE:
        xs = np.arange(ctx.order, dtype=np.int64)
        hits = np.nonzero(p.eval_many(xs) == 0)[0]
        return [Elem(ctx, int(x)) for x in hits]
    return sorted(_roots_by_splitting(p), key=lambda e: e.bits)


def _roots_by_splitting(p: UniPoly) -> list[Elem]:
    ctx = p.ctx
    x = UniPoly(ctx, (0, 1))
    g = p.gcd(p.powmod_frobenius(ctx.n) + x)
    rng = random.Random(0xC0FFEE)
    out: list[Elem] = []
    stack = [g]
    while stack:
        f = stack.pop()
        if f.degree <= 0:
            continue
        if f.degree == 1:
            out.append(Elem(ctx, f.monic().coeffs[0]))
            continue
        while True:
            delta = UniPoly(ctx, (0, rng.randrange(1, ctx.order)))
            t = delta % f
            acc = t
            for _ in range(ctx.n - 1):
                t = (t * t) % f
                acc = acc + t
            h = f.gcd(acc)
            if 0 < h.degree < f.degree:
                stack.append(h)
                stack.append(f.divmod(h)[0])
                break
    return out


def roots_in_set(ctx: FieldCtx, p: UniPoly, s: Iterable) -> list[Elem]:
    _check_same(ctx, p.ctx)
    pts = sorted({ctx.coerce(u) for u in s})
    return [Elem(ctx, u) for u in pts if p.eval_int(u) == 0]


# ---------------------------------------------------------------------------
# batched root counting (one polynomial per row)
# ---------------------------------------------------------------------------

def _row_degree(a: np.ndarray) -> np.ndarray:
    nz = a != 0
    width = a.shape[1]
    last = width - 1 - np.argmax(nz[:, ::-1], axis=1)
    return np.where(nz.any(axis=1), last, -1)


def _shift_rows(a: np.ndarray, s: np.ndarray) -> np.ndarray:
    cols = np.arange(a.shape[1])[None, :] - s[:, None]
    out = np.take_along_axis(a, np.clip(cols, 0, a.shape[1] - 1), axis=1)
    return np.where(cols >= 0, out, 0)


def _batch_gcd_degree(ctx: FieldCtx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise degree of gcd(a_i, b_i); both arrays share a column count."""
    a, b = a.copy(), b.copy()
    inv = ctx.exp_table[(-ctx.log_table) % (ctx.order - 1)]
    rows = np.arange(a.shape[0])
    while True:
        da, db = _row_degree(a), _row_degree(b)
        swap = da < db
        if swap.any():
            a[swap], b[swap] = b[swap].copy(), a[swap].copy()
            da, db = np.where(swap, db, da), np.where(swap, da, db)
        active = db >= 0
        if not active.any():
            return da
        la = a[rows, np.maximum(da, 0)]
        lb = b[rows, np.maximum(db, 0)]
        factor = ctx.vmul(la, inv[np.where(lb == 0, 1, lb)])
        factor = np.where(active, factor, 0)
        shifted = _shift_rows(b, np.where(active, da - db, 0))
        a ^= ctx.vmul(shifted, factor[:, None])


def count_roots_batch(ctx: FieldCtx, coeffs: np.ndarray) -> np.ndarray:
    """Number of distinct roots in ``ctx`` of each row polynomial.

    ``coeffs[i, k]`` is the X^k coefficient of row i; every row must share
    the same nonzero leading coefficient in the last column.  The count is
    deg gcd(p_i, X^(2^n) - X), driven by n squarings modulo p_i.
    """
    ctx.ensure_tables()
    coeffs = np.asarray(coeffs, dtype=np.int64)
    rows, width = coeffs.shape
    d = width - 1
    lead = np.unique(coeffs[:, d])
    if len(lead) != 1 or lead[0] == 0:
        raise ValueError("rows must share a nonzero leading coefficient")
    p = ctx.vmul(coeffs, ctx.inv_int(int(lead[0])))
    if d == 0:
        return np.zeros(rows, dtype=np.int64)
    if d == 1:
        return np.ones(rows, dtype=np.int64)
    exp, log = ctx.exp_wide, ctx.log_wide
    log_p = log[p[:, :d]]
    r = np.zeros((rows, 2 * d - 1), dtype=np.int64)
    r[:, 1] = 1
    for _ in range(ctx.n):
        sq = np.zeros((rows, 2 * d - 1), dtype=np.int64)
        lr = log[r[:, :d]]
        sq[:, 0::2] = exp[lr + lr]
        for k in range(2 * d - 2, d - 1, -1):
            # X^k = X^(k-d) * (p - X^d) for monic p
            sq[:, k - d:k] ^= exp[log[sq[:, k]][:, None] + log_p]
        r = sq
    diff = np.zeros((rows, width), dtype=np.int64)
    diff[:, :d] = r[:, :d]
    diff[:, 1] ^= 1
    return _batch_gcd_degree(ctx, p, diff)


# ---------------------------------------------------------------------------
# bivariate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BiPoly:
    """Sparse polynomial in X, Y: ``terms[(i, j)]`` is the coefficient of X^i Y^j."""

    ctx: FieldCtx
    terms: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), c in self.terms.items():
            if i < 0 or j < 0 or i > MAX_BIDEGREE or j > MAX_BIDEGREE:
                raise ValueError(f"monomial X^{i}Y^{j} out of range")
            c = self.ctx.coerce(c)
            if c:
                clean[(i, j)] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def from_monomials(cls, ctx: FieldCtx, monos: Iterable[tuple[int, int]]) -> BiPoly:
        """Sum of X^i Y^j with unit coefficients; repeated monomials cancel."""
        t: dict[tuple[int, int], int] = {}
        for m in monos:
            t[m] = t.get(m, 0) ^ 1
        return cls(ctx, t)

    @classmethod
    def constant(cls, ctx: FieldCtx, c: int = 1) -> BiPoly:
        return cls(ctx, {(0, 0): c})

    @classmethod
    def x(cls, ctx):
        return cls(ctx, {(1, 0): 1})

    @classmethod
    def y(cls, ctx):
        return cls(ctx, {(0, 1): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, tuple(self.terms.items())))

    def __add__(self, other: BiPoly) -> BiPoly:
        _check_same(self.ctx, other.ctx)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) ^ c
        return BiPoly(self.ctx, t)

    __sub__ = __add__

    def __mul__(self, other: BiPoly) -> BiPoly:
        _check_same(self.ctx, other.ctx)
        mul = self.ctx.mul_int
        t: dict[tuple[int, int], int] = {}
        for (i, j), a in self.terms.items():
            for (k, l), b in other.terms.items():
                key = (i + k, j + l)
                t[key] = t.get(key, 0) ^ mul(a, b)
        return BiPoly(self.ctx, t)

    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def degree_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def swap(self) -> BiPoly:
        return BiPoly(self.ctx, {(j, i): c for (i, j), c in self.terms.items()})

    def lift(self, ctx: FieldCtx) -> BiPoly:
        """Reinterpret a polynomial with GF(2) coefficients in another field."""
        if any(c != 1 for c in self.terms.values()):
            raise ValueError("only GF(2)-coefficient polynomials can be lifted")
        return BiPoly(ctx, dict(self.terms))

    def eval_int(self, x: int, y: int) -> int:
        pw = self.ctx.pow_int
        mul = self.ctx.mul_int
        acc = 0
        for (i, j), c in self.terms.items():
            acc ^= mul(c, mul(pw(x, i), pw(y, j)))
        return acc

    def __call__(self, x, y) -> Elem:
        return Elem(self.ctx, self.eval_int(self.ctx.coerce(x), self.ctx.coerce(y)))

    def eval_grid(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Evaluate at broadcast arrays of coordinates (needs exp/log tables)."""
        ctx = self.ctx.ensure_tables()
        xs, ys = np.broadcast_arrays(np.asarray(xs, np.int64), np.asarray(ys, np.int64))
        acc = np.zeros(xs.shape, dtype=np.int64)
        for (i, j), c in self.terms.items():
            acc ^= ctx.vmul(ctx.vmul(ctx.vpow(xs, i), ctx.vpow(ys, j)), c)
        return acc

    def specialize_y(self, y) -> UniPoly:
        """The univariate polynomial p(X, y)."""
        y = self.ctx.coerce(y)
        pw, mul = self.ctx.pow_int, self.ctx.mul_int
        c = [0] * (self.degree_x() + 1)
        for (i, j), a in self.terms.items():
            c[i] ^= mul(a, pw(y, j))
        return UniPoly(self.ctx, tuple(c))

    def x_coefficients(self, ys: np.ndarray) -> np.ndarray:
        """Rows of X-coefficients of p(X, y) for each y in ``ys``."""
        ctx = self.ctx.ensure_tables()
        ys = np.asarray(ys, dtype=np.int64)
        out = np.zeros((len(ys), self.degree_x() + 1), dtype=np.int64)
        for (i, j), a in self.terms.items():
            out[:, i] ^= ctx.vmul(ctx.vpow(ys, j), a)
        return out

    def top_form(self) -> BiPoly:
        """Homogeneous part of top total degree, i.e. h(X, Y, 0)."""
        d = self.total_degree()
        return BiPoly(self.ctx, {k: c for k, c in self.terms.items() if sum(k) == d})

    def __repr__(self):
        parts = [f"{c:#x}*X^{i}Y^{j}" for (i, j), c in self.terms.items()]
        return f"BiPoly({' + '.join(parts) or '0'})"


def expand_product(ctx: FieldCtx, factors: Iterable[BiPoly]) -> BiPoly:
    acc = BiPoly.constant(ctx)
    for f in factors:
        _check_same(ctx, f.ctx)
        acc = acc * f
    return acc


def infinity_points(ctx: FieldCtx, p: BiPoly) -> list[tuple[Elem, Elem, Elem]]:
    """Projective points (x:y:0) on the closure of p = 0.

    Points are normalised so that the first nonzero coordinate is 1:
    (1:y:0) for each root y of h(1, Y), then (0:1:0) when h(0, 1) = 0.
    """
    _check_same(ctx, p.ctx)
    if p.is_zero():
        raise ValueError("the zero polynomial has no curve")
    top = p.top_form()
    d = p.total_degree()
    # h(1, Y) as a univariate polynomial in Y
    c = [0] * (d + 1)
    for (i, j), a in top.terms.items():
        c[j] ^= a
    h1 = UniPoly(ctx, tuple(c))
    pts = []
    if h1.is_zero():
        pts = [(ctx.one, Elem(ctx, y), ctx.zero) for y in range(ctx.order)]
    else:
        pts = [(ctx.one, y, ctx.zero) for y in roots_in_field(ctx, h1)]
    if top.terms.get((0, d), 0) == 0:
        pts.append((ctx.zero, ctx.one, ctx.zero))
    return pts
