"""Binary extension fields GF(2^n) in polynomial basis.

Elements are bit-packed coordinate vectors: bit ``i`` of the integer is the
coefficient of ``X^i``.  Addition is xor.  A :class:`FieldCtx` owns the
modulus and every arithmetic routine; :class:`Elem` is a thin value type
that remembers its field so that mixing fields is caught.

Hot loops elsewhere in the package work on raw ``int`` coordinates through
the ``*_int`` methods and on numpy arrays through :meth:`FieldCtx.vmul` and
the exp/log tables.
"""

from __future__ import annotations

import os
import random
from functools import cached_property, lru_cache
from importlib import resources
from math import gcd

import numpy as np

MAX_DEGREE = 40
TABLE_MAX_DEGREE = 24
MODULUS_TABLE_ENV = "PTLAB_MODULUS_TABLE"


class FieldMismatchError(ValueError):
    """Raised when elements of two different fields are combined."""


# ---------------------------------------------------------------------------
# GF(2)[X] arithmetic on ints
# ---------------------------------------------------------------------------

def clmul(a: int, b: int) -> int:
    """Carryless product of two GF(2)[X] polynomials."""
    if a.bit_length() < b.bit_length():
        a, b = b, a
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def gf2_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def gf2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, gf2_mod(a, b)
    return a


def gf2_mulmod(a: int, b: int, m: int) -> int:
    return gf2_mod(clmul(a, b), m)


def is_irreducible(f: int) -> bool:
    """Ben-Or test: ``f`` has no factor of degree k <= deg/2.

    Each step checks gcd(f, X^(2^k) - X) == 1.
    """
    n = f.bit_length() - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if not f & 1:
        return False
    xp = 0b10
    for _ in range(n // 2):
        xp = gf2_mulmod(xp, xp, f)
        if gf2_gcd(f, xp ^ 0b10) != 1:
            return False
    return True


def smallest_irreducible(n: int) -> int:
    """Lexicographically smallest irreducible polynomial of degree ``n``."""
    for low in range(1 << n):
        f = (1 << n) | low
        if is_irreducible(f):
            return f
    raise AssertionError("unreachable: irreducibles exist in every degree")


def format_modulus_table(max_degree: int = MAX_DEGREE) -> str:
    return "".join(f"{n} {smallest_irreducible(n):x}\n" for n in range(1, max_degree + 1))


def parse_modulus_table(text: str) -> dict[int, int]:
    table = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        n, hexmod = line.split()
        table[int(n)] = int(hexmod, 16)
    return table


@lru_cache(maxsize=None)
def _load_table(path: str | None) -> dict[int, int]:
    if path is None:
        text = resources.files("ptlab").joinpath("data/moduli.txt").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return parse_modulus_table(text)


def modulus_table() -> dict[int, int]:
    """The golden modulus table, honouring ``PTLAB_MODULUS_TABLE``."""
    return _load_table(os.environ.get(MODULUS_TABLE_ENV))


# ---------------------------------------------------------------------------
# integer helpers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization by trial division; fine for n < 2^40."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


# ---------------------------------------------------------------------------
# field context and elements
# ---------------------------------------------------------------------------

class Elem:
    """A field element tied to its :class:`FieldCtx`."""

    __slots__ = ("ctx", "bits")

    def __init__(self, ctx: FieldCtx, bits: int):
        bits = int(bits)
        if not 0 <= bits < ctx.order:
            raise ValueError(f"{bits:#x} is not an element of GF(2^{ctx.n})")
        self.ctx = ctx
        self.bits = bits

    def _other(self, other) -> int:
        return self.ctx.coerce(other)

    def __add__(self, other):
        return Elem(self.ctx, self.bits ^ self._other(other))

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        return Elem(self.ctx, self.ctx.mul_int(self.bits, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Elem(self.ctx, self.ctx.mul_int(self.bits, self.ctx.inv_int(self._other(other))))

    def __rtruediv__(self, other):
        return Elem(self.ctx, self.ctx.mul_int(self._other(other), self.ctx.inv_int(self.bits)))

    def __pow__(self, e: int):
        return Elem(self.ctx, self.ctx.pow_int(self.bits, e))

    def __eq__(self, other):
        if isinstance(other, Elem):
            return self.ctx == other.ctx and self.bits == other.bits
        if isinstance(other, int):
            return self.bits == other
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.modulus, self.bits))

    def __bool__(self):
        return self.bits != 0

    def __int__(self):
        return self.bits

    def __repr__(self):
        return f"Elem({self.bits:#x})"


class FieldCtx:
    """GF(2^n) defined by an irreducible ``modulus`` (bit i = coeff of X^i).

    Immutable after construction; shareable between threads.
    """

    def __init__(self, n: int, modulus: int, generator_hint: int | None = None):
        if not 1 <= n <= MAX_DEGREE:
            raise ValueError(f"degree {n} outside 1..{MAX_DEGREE}")
        if modulus.bit_length() - 1 != n:
            raise ValueError(f"modulus {modulus:#x} does not have degree {n}")
        if not is_irreducible(modulus):
            raise ValueError(f"modulus {modulus:#x} is reducible")
        self.n = n
        self.modulus = modulus
        self.order = 1 << n
        self.mask = self.order - 1
        self._red = modulus ^ (1 << n)
        if generator_hint is not None and self._order_int(generator_hint) != self.order - 1:
            raise ValueError("generator_hint is not primitive")
        self._generator_hint = generator_hint

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self.modulus == other.modulus

    def __hash__(self):
        return hash(self.modulus)

    def __repr__(self):
        return f"FieldCtx(n={self.n}, modulus={self.modulus:#x})"

    # -- element plumbing -------------------------------------------------

    def __call__(self, bits: int) -> Elem:
        return Elem(self, bits)

    def coerce(self, x) -> int:
        """Raw coordinates of ``x``; rejects elements of another field."""
        if isinstance(x, Elem):
            if x.ctx != self:
                raise FieldMismatchError(f"element of {x.ctx!r} used in {self!r}")
            return x.bits
        x = int(x)
        if not 0 <= x < self.order:
            raise ValueError(f"{x:#x} is not an element of GF(2^{self.n})")
        return x

    @property
    def zero(self) -> Elem:
        return Elem(self, 0)

    @property
    def one(self) -> Elem:
        return Elem(self, 1)

    def elements(self):
        return (Elem(self, i) for i in range(self.order))

    def random_element(self, rng: random.Random, nonzero: bool = False) -> Elem:
        lo = 1 if nonzero else 0
        return Elem(self, rng.randrange(lo, self.order))

    # -- scalar arithmetic on raw ints --------------------------------------

    def mul_int(self, a: int, b: int) -> int:
        r = 0
        red, top = self._red, self.order
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= top | red
        return r

    def sqr_int(self, a: int) -> int:
        return self.mul_int(a, a)

    def pow_int(self, a: int, e: int) -> int:
        if e < 0:
            a = self.inv_int(a)
            e = -e
        r = 1
        while e:
            if e & 1:
                r = self.mul_int(r, a)
            e >>= 1
            if e:
                a = self.mul_int(a, a)
        return r

    def inv_int(self, a: int) -> int:
        """Inverse through the extended Euclidean algorithm in GF(2)[X]."""
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        r0, r1 = self.modulus, a
        s0, s1 = 0, 1
        while r1 != 1:
            shift = r0.bit_length() - r1.bit_length()
            if shift < 0:
                r0, r1, s0, s1 = r1, r0, s1, s0
                continue
            r0 ^= r1 << shift
            s0 ^= s1 << shift
            if r0.bit_length() < r1.bit_length():
                r0, r1, s0, s1 = r1, r0, s1, s0
        return gf2_mod(s1, self.modulus)

    def frobenius_int(self, a: int, k: int) -> int:
        for _ in range(k % self.n if a else 0):
            a = self.mul_int(a, a)
        return a

    def _order_int(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        order = self.order - 1
        for p, _ in factorize(order):
            while order % p == 0 and self.pow_int(a, order // p) == 1:
                order //= p
        return order

    # -- generator and vectorized tables --------------------------------------

    @cached_property
    def generator(self) -> int:
        """A primitive element, from the hint or by seeded random sampling."""
        if self._generator_hint is not None:
            return self._generator_hint
        if self.order == 2:
            return 1
        rng = random.Random(0x5EED + self.n)
        while True:
            g = rng.randrange(2, self.order)
            if self._order_int(g) == self.order - 1:
                return g

    def vmul(self, a, b) -> np.ndarray:
        """Elementwise product of arrays (or array and scalar) of coordinates."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if "log_table" in self.__dict__:
            exp, log = self.exp_wide, self.log_wide
            return exp[log[a] + log[b]]
        a, b = np.broadcast_arrays(a, b)
        a = a.copy()
        r = np.zeros(a.shape, dtype=np.int64)
        top, red = self.order, self._red
        for i in range(self.n):
            r ^= np.where((b >> i) & 1 == 1, a, 0)
            a <<= 1
            a = np.where(a & top, a ^ (top | red), a)
        return r

    @cached_property
    def exp_table(self) -> np.ndarray:
        """``exp_table[k] = g^k`` for k in [0, 2^n - 2], g = :attr:`generator`."""
        if self.n > TABLE_MAX_DEGREE:
            raise ValueError(f"tables limited to n <= {TABLE_MAX_DEGREE}")
        size = self.order - 1
        exp = np.empty(size, dtype=np.int64)
        exp[0] = 1
        filled, step = 1, self.generator
        while filled < size:
            chunk = min(filled, size - filled)
            exp[filled:filled + chunk] = self.vmul(exp[:chunk], step)
            step = self.mul_int(step, step)
            filled += chunk
        return exp

    @cached_property
    def log_table(self) -> np.ndarray:
        """Discrete log base :attr:`generator`; entry 0 is a -1 sentinel."""
        log = np.full(self.order, -1, dtype=np.int64)
        log[self.exp_table] = np.arange(self.order - 1, dtype=np.int64)
        return log

    @cached_property
    def exp_wide(self) -> np.ndarray:
        """exp_table repeated twice, then zeros: indexed by a sum of two
        :attr:`log_wide` entries it needs neither a modulus nor a zero test."""
        n = self.order - 1
        out = np.zeros(4 * n + 1, dtype=np.int64)
        out[:n] = self.exp_table
        out[n:2 * n] = self.exp_table
        return out

    @cached_property
    def log_wide(self) -> np.ndarray:
        """log_table with the zero sentinel moved to 2(q-1), into the zero band."""
        out = self.log_table.copy()
        out[0] = 2 * (self.order - 1)
        return out

    def ensure_tables(self) -> FieldCtx:
        self.log_table  # noqa: B018  builds exp_table too
        self.exp_wide  # noqa: B018
        self.log_wide  # noqa: B018
        return self

    def vpow(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        log = self.log_table
        out = self.exp_table[(log[a] * (e % (self.order - 1))) % (self.order - 1)]
        if e % (self.order - 1) == 0:
            out = np.ones_like(a)
        return np.where(a == 0, 0 if e > 0 else 1, out)


@lru_cache(maxsize=None)
def new_field(n: int) -> FieldCtx:
    """GF(2^n) with the lexicographically smallest irreducible modulus."""
    if not 1 <= n <= MAX_DEGREE:
        raise ValueError(f"degree {n} outside 1..{MAX_DEGREE}")
    table = modulus_table()
    modulus = table[n] if n in table else smallest_irreducible(n)
    return FieldCtx(n, modulus)


def field_from_modulus(modulus: int) -> FieldCtx:
    return FieldCtx(modulus.bit_length() - 1, modulus)


# ---------------------------------------------------------------------------
# functional surface
# ---------------------------------------------------------------------------

def mul(ctx: FieldCtx, a, b) -> Elem:
    return Elem(ctx, ctx.mul_int(ctx.coerce(a), ctx.coerce(b)))


def inv(ctx: FieldCtx, a) -> Elem:
    return Elem(ctx, ctx.inv_int(ctx.coerce(a)))


def frobenius(ctx: FieldCtx, a, k: int) -> Elem:
    """``a^(2^k)`` by repeated squaring."""
    if k < 0:
        raise ValueError("iteration count must be >= 0")
    return Elem(ctx, ctx.frobenius_int(ctx.coerce(a), k))


def trace_rel(ctx: FieldCtx, a, sub: int, top: int) -> Elem:
    """Relative trace from GF(2^top) down to GF(2^sub), evaluated inside ``ctx``.

    ``a`` is read as an element of GF(2^top) through the common subfield,
    so Frobenius exponents 2^(sub*i) reduce to 2^(sub*i mod n).  When
    ``top`` is a proper divisor of n, ``a`` must lie in GF(2^top).
    """
    if sub <= 0 or top <= 0 or top % sub:
        raise ValueError(f"{sub} does not divide {top}")
    x = ctx.coerce(a)
    if top % ctx.n:
        if ctx.n % top:
            raise ValueError(f"GF(2^{top}) and GF(2^{ctx.n}) are not nested")
        if ctx.frobenius_int(x, top) != x:
            raise ValueError(f"element not in GF(2^{top})")
    acc = 0
    for i in range(top // sub):
        acc ^= ctx.frobenius_int(x, (sub * i) % ctx.n)
    return Elem(ctx, acc)


def mult_order(ctx: FieldCtx, a) -> int:
    x = ctx.coerce(a)
    if x == 0:
        raise ValueError("0 has no multiplicative order")
    return ctx._order_int(x)


def is_in_subfield(ctx: FieldCtx, a, k: int) -> bool:
    if k <= 0 or ctx.n % k:
        raise ValueError(f"{k} does not divide {ctx.n}")
    x = ctx.coerce(a)
    return ctx.frobenius_int(x, k) == x


def element_from_exponents(ctx: FieldCtx, exps) -> Elem:
    """The element sum X^e for e in ``exps`` (reduced mod the modulus)."""
    acc = 0
    for e in exps:
        acc ^= 1 << e
    return Elem(ctx, gf2_mod(acc, ctx.modulus))


def units_coprime(n: int):
    return (d for d in range(1, n) if gcd(d, n) == 1)
