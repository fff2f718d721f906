"""Known permutation trinomials X^r h(X^(q-1)) over GF(2^(2m)).

Rows 1..15 are the previously published classes; NEW_CLASSES holds the
three families (7,7,5), (9,8,6), (11,10,4) established alongside them.
Each row carries the sufficient condition on m under which it permutes.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable

from .gf2m import FieldCtx, new_field
from .perm import ExpPoly

CONDITIONS: dict[str, Callable[[int], bool]] = {
    "m odd": lambda m: m % 2 == 1,
    "gcd(m,3)=1": lambda m: gcd(m, 3) == 1,
    "m=2 mod 4": lambda m: m % 4 == 2,
    "m=2,4 mod 6": lambda m: m % 6 in (2, 4),
    "m!=0 mod 4, gcd(m,3)=1": lambda m: m % 4 != 0 and gcd(m, 3) == 1,
    "m even, m!=0 mod 3": lambda m: m % 2 == 0 and m % 3 != 0,
    "m!=0 mod 5": lambda m: m % 5 != 0,
}


@dataclass(frozen=True)
class CatalogRow:
    index: int
    r: int
    h_exps: tuple[int, ...]
    condition: str
    reference: str

    def holds(self, m: int) -> bool:
        return CONDITIONS[self.condition](m)

    @property
    def name(self) -> str:
        return f"f{self.index}"

    @property
    def rab(self) -> tuple[int, int, int] | None:
        """(r, alpha, beta) when h = 1 + X^beta + X^alpha, else None."""
        if len(self.h_exps) != 3 or 0 not in self.h_exps:
            return None
        beta, alpha = sorted(e for e in self.h_exps if e)
        return (self.r, alpha, beta)

    def exp_poly(self, m: int, ctx: FieldCtx | None = None) -> ExpPoly:
        ctx = ctx if ctx is not None else new_field(2 * m)
        q = 1 << m
        return ExpPoly.from_exponents(ctx, [self.r + e * (q - 1) for e in self.h_exps])


TABLE1: tuple[CatalogRow, ...] = (
    CatalogRow(1, 3, (0, 1, 3), "m odd", "Zha-Li-Fan Thm 4.2"),
    CatalogRow(2, 3, (0, 2, 3), "m odd", "Zha-Li-Fan Thm 4.1"),
    CatalogRow(3, 2, (0, 2, 3), "gcd(m,3)=1", "Gupta-Sharma Thm 3.3"),
    CatalogRow(4, 4, (0, 1, 3), "gcd(m,3)=1", "Gupta-Sharma Thm 3.1"),
    CatalogRow(5, 3, (0, 3, 4), "m odd", "Gupta-Sharma Thm 3.5"),
    CatalogRow(6, 5, (0, 1, 4), "m odd", "Gupta-Sharma Thm 3.4"),
    CatalogRow(7, 5, (0, 3, 4), "m=2 mod 4", "Zha-Li-Fan Thm 3.1"),
    CatalogRow(8, 4, (0, 1, 5), "m=2,4 mod 6", "Li et al. Thm 2.7"),
    CatalogRow(9, 5, (0, 1, 5), "m=2 mod 4", "Li et al. Thm 2.4"),
    CatalogRow(10, 5, (1, 2, 5), "m=2 mod 4", "Zha-Li-Fan Thm 3.2"),
    CatalogRow(11, 5, (0, 4, 5), "m=2 mod 4", "Zha-Li-Fan Thm 4.4"),
    CatalogRow(12, 5, (0, 2, 6), "m!=0 mod 4, gcd(m,3)=1", "Li et al. Thm 2.10"),
    CatalogRow(13, 5, (0, 5, 6), "m!=0 mod 4, gcd(m,3)=1", "Yadav et al. Thm 3.2"),
    CatalogRow(14, 7, (0, 1, 6), "gcd(m,3)=1", "Yadav et al. Thm 3.1"),
    CatalogRow(15, 7, (0, 4, 6), "gcd(m,3)=1", "Yadav et al. Thm 3.3"),
)

NEW_CLASSES: tuple[CatalogRow, ...] = (
    CatalogRow(16, 7, (0, 5, 7), "m even, m!=0 mod 3", "new class F3"),
    CatalogRow(17, 9, (0, 6, 8), "m odd", "new class F2"),
    CatalogRow(18, 11, (0, 4, 10), "m!=0 mod 5", "new class F1"),
)

ALL_ROWS = TABLE1 + NEW_CLASSES


def row(i: int) -> CatalogRow:
    return ALL_ROWS[i - 1]


def _f7_rep(m: int) -> tuple[int, int, int]:
    # f7 only reaches the shape of its partner f10 when alpha = 3 is lifted by q + 1
    return (5, (1 << m) + 4, 4)


# Equivalent pairs (i, j) and the (r, alpha, beta) presentation of f_i whose
# partner X^(2a-r)(X^(a(q-1)) + X^((a-b)(q-1)) + 1) is f_j.
EQUIVALENT_PAIRS: tuple[tuple[int, int, Callable[[int], tuple[int, int, int]]], ...] = (
    (1, 2, lambda m: (3, 3, 1)),
    (3, 4, lambda m: (2, 3, 2)),
    (5, 6, lambda m: (3, 4, 3)),
    (7, 10, _f7_rep),
    (9, 11, lambda m: (5, 5, 1)),
)


def lookup(r: int, alpha: int, beta: int) -> CatalogRow | None:
    """Catalog row with h = 1 + X^beta + X^alpha and the given r."""
    for entry in ALL_ROWS:
        if entry.rab == (r, alpha, beta):
            return entry
    return None
