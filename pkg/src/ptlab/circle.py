"""The unit circle mu_{q+1} inside GF(q^2), q = 2^m, and the map phi.

phi(x) = (x + w^2) / (x + w) sends GF(q) bijectively onto mu_{q+1} minus 1
whenever w (a root of X^2 + X + 1) lies outside GF(q), which happens
exactly for odd m.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .gf2m import Elem, FieldCtx, new_field
from .poly import UniPoly, roots_in_field


class CircleCtx:
    def __init__(self, m: int, big: FieldCtx | None = None):
        if m < 1:
            raise ValueError("m must be positive")
        self.m = m
        self.q = 1 << m
        self.big = big if big is not None else new_field(2 * m)
        if self.big.n != 2 * m:
            raise ValueError(f"expected GF(2^{2 * m}), got {self.big!r}")
        self.omega: Elem | None = None
        if m % 2 == 1:
            w = roots_in_field(self.big, UniPoly.from_exponents(self.big, [2, 1, 0]))
            self.omega = w[0]

    def __repr__(self):
        return f"CircleCtx(m={self.m})"

    @property
    def size(self) -> int:
        return self.q + 1

    @cached_property
    def circle_array(self) -> np.ndarray:
        """Coordinates of g^(k(q-1)) for k = 0..q, g the field generator."""
        big = self.big.ensure_tables()
        k = np.arange(self.q + 1, dtype=np.int64)
        return big.exp_table[(k * (self.q - 1)) % (big.order - 1)]

    @cached_property
    def subfield_array(self) -> np.ndarray:
        """Coordinates of GF(q) inside GF(q^2): 0 and g^(k(q+1))."""
        big = self.big.ensure_tables()
        k = np.arange(self.q - 1, dtype=np.int64)
        return np.concatenate(([0], big.exp_table[(k * (self.q + 1)) % (big.order - 1)]))

    def on_circle(self, u) -> bool:
        x = self.big.coerce(u)
        return x != 0 and self.big.pow_int(x, self.q + 1) == 1

    def in_subfield(self, x) -> bool:
        x = self.big.coerce(x)
        return self.big.pow_int(x, self.q) == x


def enumerate_circle(ctx: CircleCtx) -> list[Elem]:
    return [Elem(ctx.big, int(u)) for u in ctx.circle_array]


def _need_omega(ctx: CircleCtx) -> int:
    if ctx.omega is None:
        raise ValueError(f"phi needs w outside GF(q); m={ctx.m} is even")
    return ctx.omega.bits


def phi(ctx: CircleCtx, x) -> Elem:
    """(x + w^2) / (x + w) for x in GF(q)."""
    w = _need_omega(ctx)
    big = ctx.big
    xi = big.coerce(x)
    if not ctx.in_subfield(xi):
        raise ValueError("phi is defined on GF(q) only")
    w2 = big.mul_int(w, w)
    return Elem(big, big.mul_int(xi ^ w2, big.inv_int(xi ^ w)))


def phi_inv(ctx: CircleCtx, u) -> Elem:
    """(w u + w^2) / (u + 1) for u on the circle, u != 1."""
    w = _need_omega(ctx)
    big = ctx.big
    ui = big.coerce(u)
    if not ctx.on_circle(ui):
        raise ValueError("phi_inv is defined on mu_{q+1} only")
    if ui == 1:
        raise ZeroDivisionError("u = 1 is the pole of phi_inv")
    w2 = big.mul_int(w, w)
    return Elem(big, big.mul_int(big.mul_int(w, ui) ^ w2, big.inv_int(ui ^ 1)))
