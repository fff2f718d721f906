"""Permutation tests over GF(q^2).

Two independent routes decide whether a polynomial permutes the field:
the exhaustive image bitmap, and the circle criterion (X^r h(X^(q-1))
permutes GF(q^2) iff gcd(r, q-1) = 1 and X^r h(X)^(q-1) permutes
mu_{q+1}).  They are meant to be run against each other.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import gcd
from typing import Iterable

import numpy as np

from .circle import CircleCtx
from .gf2m import Elem, FieldCtx, TABLE_MAX_DEGREE, mult_order
from .poly import UniPoly


@dataclass(frozen=True)
class ExpPoly:
    """Sum of coeff * X^e with exponents reduced mod 2^n - 1.

    ``zero_maps_to`` is the value at 0, since X^0 and X^(2^n - 1) agree
    everywhere except there.
    """

    ctx: FieldCtx
    terms: tuple[tuple[int, int], ...]
    zero_maps_to: int = 0

    def __post_init__(self):
        mod = self.ctx.order - 1
        merged: dict[int, int] = {}
        for e, c in self.terms:
            e %= mod
            merged[e] = merged.get(e, 0) ^ self.ctx.coerce(c)
        terms = tuple(sorted((e, c) for e, c in merged.items() if c))
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "zero_maps_to", self.ctx.coerce(self.zero_maps_to))

    @classmethod
    def from_exponents(cls, ctx: FieldCtx, exps: Iterable[int]) -> ExpPoly:
        return cls(ctx, tuple((e, 1) for e in exps))

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.terms)

    def coefficient(self, e: int) -> int:
        e %= self.ctx.order - 1
        return dict(self.terms).get(e, 0)

    def eval_int(self, x: int) -> int:
        if x == 0:
            return self.zero_maps_to
        acc = 0
        for e, c in self.terms:
            acc ^= self.ctx.mul_int(c, self.ctx.pow_int(x, e))
        return acc

    def __call__(self, x) -> Elem:
        return Elem(self.ctx, self.eval_int(self.ctx.coerce(x)))

    def values_by_log(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        """f(g^k) for k in [start, stop), g the field generator."""
        stop = self.ctx.order - 1 if stop is None else stop
        return self.values_at_logs(np.arange(start, stop, dtype=np.int64))

    def values_at_logs(self, k: np.ndarray) -> np.ndarray:
        ctx = self.ctx.ensure_tables()
        mod = ctx.order - 1
        k = np.asarray(k, dtype=np.int64)
        acc = np.zeros(k.shape, dtype=np.int64)
        for e, c in self.terms:
            term = ctx.exp_table[(k * e) % mod]
            acc ^= term if c == 1 else ctx.vmul(term, c)
        return acc

    def __repr__(self):
        return "ExpPoly(" + " + ".join(
            f"X^{e}" if c == 1 else f"{c:#x}*X^{e}" for e, c in self.terms) + ")"


def _chunk_bitmap(f: ExpPoly, start: int, stop: int) -> tuple[np.ndarray, int]:
    seen = np.zeros(f.ctx.order, dtype=bool)
    vals = f.values_by_log(start, stop)
    seen[vals] = True
    return seen, int(np.count_nonzero(seen))


def is_permutation_bruteforce(ctx: FieldCtx, f: ExpPoly, workers: int = 1) -> bool:
    """Mark every image in a bitmap and compare popcounts with the field size.

    Input ranges are split across ``workers``; each keeps a private bitmap
    and the merged OR must cover the field with no lost popcount.
    """
    if f.ctx != ctx:
        raise ValueError("polynomial lives in another field")
    if ctx.n > TABLE_MAX_DEGREE:
        raise ValueError(f"brute force limited to n <= {TABLE_MAX_DEGREE}")
    ctx.ensure_tables()
    mod = ctx.order - 1
    workers = max(1, workers)
    bounds = [mod * i // workers for i in range(workers + 1)]
    jobs = list(zip(bounds[:-1], bounds[1:]))
    if workers == 1:
        parts = [_chunk_bitmap(f, a, b) for a, b in jobs]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda j: _chunk_bitmap(f, *j), jobs))
    merged = np.zeros(ctx.order, dtype=bool)
    total = 0
    for seen, pop in parts:
        merged |= seen
        total += pop
    if merged[f.zero_maps_to]:
        return False
    merged[f.zero_maps_to] = True
    total += 1
    return total == ctx.order and bool(merged.all())


def circle_map_values(circle: CircleCtx, r: int, h: UniPoly) -> np.ndarray:
    """u^r h(u)^(q-1) for every u on the circle; -1 where h(u) = 0."""
    big = circle.big.ensure_tables()
    if h.ctx != big:
        raise ValueError("h must have coefficients in GF(q^2)")
    mod = big.order - 1
    q = circle.q
    k = np.arange(q + 1, dtype=np.int64)
    u = circle.circle_array
    hu = h.eval_many(u)
    lh = big.log_table[hu]
    logs = (k * (q - 1) * r + lh * (q - 1)) % mod
    return np.where(hu == 0, -1, big.exp_table[logs])


def is_pp_via_criterion(ctx2m: FieldCtx, circle: CircleCtx, r: int, h: UniPoly) -> bool:
    if circle.big != ctx2m:
        raise ValueError("circle does not live in the given field")
    if gcd(r, circle.q - 1) != 1:
        return False
    vals = circle_map_values(circle, r, h)
    if (vals < 0).any():
        return False
    return len(np.unique(vals)) == circle.size


def circle_image_order(circle: CircleCtx, r: int, h: UniPoly, u) -> int | None:
    """Multiplicative order of u^r h(u)^(q-1), or None when h(u) = 0."""
    big = circle.big
    ui = big.coerce(u)
    if not circle.on_circle(ui):
        raise ValueError("u is not on the unit circle")
    hu = h.eval_int(ui)
    if hu == 0:
        return None
    v = big.mul_int(big.pow_int(ui, r), big.pow_int(hu, circle.q - 1))
    return mult_order(big, v)
