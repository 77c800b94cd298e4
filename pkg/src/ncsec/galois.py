"""Arithmetic in GF(2^m), 1 <= m <= 16.

Elements are integers in ``[0, 2^m)`` read as GF(2) polynomial bitmasks.
Multiplication is carry-less multiply followed by reduction modulo the
context's irreducible polynomial. For m <= 8 a full product table is
built as a fast path; :func:`clmul_mod` is the table-free reference.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

MAX_DEGREE = 16
TABLE_MAX_DEGREE = 8

# Smallest-bitmask irreducible polynomial of each degree with constant term 1.
DEFAULT_POLYS = {
    1: 0x3,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x203,
    10: 0x409,
    11: 0x805,
    12: 0x1009,
    13: 0x201B,
    14: 0x4021,
    15: 0x8003,
    16: 0x1002B,
}


class FieldError(ValueError):
    pass


def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mod(a: int, b: int) -> int:
    """Remainder of GF(2)[x] division a mod b."""
    db = poly_degree(b)
    while a and poly_degree(a) >= db:
        a ^= b << (poly_degree(a) - db)
    return a


def is_irreducible(p: int) -> bool:
    """Trial division by every polynomial of degree 1..deg(p)//2."""
    m = poly_degree(p)
    if m < 1:
        return False
    for d in range(1, m // 2 + 1):
        for divisor in range(1 << d, 1 << (d + 1)):
            if poly_mod(p, divisor) == 0:
                return False
    return True


def clmul_mod(a: int, b: int, poly: int, m: int) -> int:
    """Reference product: shift-and-add with reduction after every shift."""
    result = 0
    top = 1 << m
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= poly
    return result


@dataclass(frozen=True)
class FieldContext:
    """GF(2^m) defined by ``reduction_poly``. Immutable and shareable."""

    m: int
    reduction_poly: int
    _table: tuple | None = field(default=None, repr=False, compare=False)
    _inv: tuple = field(default=(), repr=False, compare=False)
    _np_table: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def q(self) -> int:
        return 1 << self.m

    @property
    def descriptor(self) -> dict:
        return {"m": self.m, "poly": hex(self.reduction_poly)}

    def __repr__(self) -> str:
        return f"GF(2^{self.m}, poly={hex(self.reduction_poly)})"

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(self, value)

    def elements(self):
        return [FieldElement(self, v) for v in range(self.q)]

    def check(self, value: int) -> int:
        if not 0 <= value < self.q:
            raise FieldError(f"{value} is not an element of GF(2^{self.m})")
        return value

    # Integer-level arithmetic, used by the linear algebra hot paths.

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if self._table is not None:
            return self._table[a][b]
        return clmul_mod(a, b, self.reduction_poly, self.m)

    def mul_ref(self, a: int, b: int) -> int:
        return clmul_mod(a, b, self.reduction_poly, self.m)

    def pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in a field")
        if self._inv:
            return self._inv[a]
        # a^(q-2) = a^-1 in the multiplicative group of order q-1.
        return self.pow(a, self.q - 2)

    def mul_row(self, c: int) -> tuple | None:
        """Row ``c`` of the product table, or None when no table exists."""
        if self._table is None:
            return None
        return self._table[c]

    def scale(self, c: int, vec: list[int]) -> list[int]:
        if c == 0:
            return [0] * len(vec)
        if c == 1:
            return list(vec)
        row = self.mul_row(c)
        if row is not None:
            return [row[x] for x in vec]
        return [self.mul(c, x) for x in vec]

    def axpy(self, c: int, x: list[int], y: list[int]) -> list[int]:
        """Return y + c*x elementwise."""
        if c == 0:
            return list(y)
        if c == 1:
            return [a ^ b for a, b in zip(x, y)]
        row = self.mul_row(c)
        if row is not None:
            return [row[a] ^ b for a, b in zip(x, y)]
        return [self.mul(c, a) ^ b for a, b in zip(x, y)]

    def dot(self, x, y) -> int:
        acc = 0
        for a, b in zip(x, y):
            if a and b:
                acc ^= self.mul(a, b)
        return acc

    def mul_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product of integer arrays."""
        if self._np_table is not None:
            return self._np_table[a, b]
        return _clmul_array(np.asarray(a), np.asarray(b), self.reduction_poly, self.m)


def _clmul_array(a: np.ndarray, b: np.ndarray, poly: int, m: int) -> np.ndarray:
    a, b = np.broadcast_arrays(a.astype(np.int64), b.astype(np.int64))
    a = a.copy()
    result = np.zeros_like(a)
    top = 1 << m
    for bit in range(m):
        result ^= np.where((b >> bit) & 1, a, 0)
        a <<= 1
        a = np.where(a & top, a ^ poly, a)
    return result


@lru_cache(maxsize=None)
def make_field(m: int, reduction_poly: int | None = None) -> FieldContext:
    """Build GF(2^m); default polynomial from :data:`DEFAULT_POLYS`."""
    if not isinstance(m, int) or not 1 <= m <= MAX_DEGREE:
        raise FieldError(f"extension degree must be in [1, {MAX_DEGREE}], got {m!r}")
    poly = DEFAULT_POLYS[m] if reduction_poly is None else int(reduction_poly)
    if poly_degree(poly) != m:
        raise FieldError(f"polynomial {hex(poly)} does not have degree {m}")
    if not is_irreducible(poly):
        raise FieldError(f"polynomial {hex(poly)} is reducible over GF(2)")
    if m > TABLE_MAX_DEGREE:
        return FieldContext(m, poly)
    q = 1 << m
    values = np.arange(q, dtype=np.int64)
    np_table = _clmul_array(values[:, None], values[None, :], poly, m)
    np_table.setflags(write=False)
    table = tuple(tuple(row) for row in np_table.tolist())
    inv = [0] * q
    for a in range(1, q):
        inv[a] = int(np.flatnonzero(np_table[a] == 1)[0])
    return FieldContext(m, poly, table, tuple(inv), np_table)


def field_from_descriptor(desc: dict) -> FieldContext:
    poly = desc.get("poly")
    if isinstance(poly, str):
        poly = int(poly, 0)
    return make_field(int(desc["m"]), poly)


class FieldElement:
    """A value bound to a :class:`FieldContext`."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldContext, value: int):
        self.ctx = ctx
        self.value = ctx.check(int(value))

    def _same(self, other: FieldElement) -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.ctx != self.ctx:
            raise FieldError(f"context mismatch: {self.ctx!r} vs {other.ctx!r}")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._same(other)
        return FieldElement(self.ctx, self.value ^ other.value)

    __sub__ = __add__

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._same(other)
        return FieldElement(self.ctx, self.ctx.mul(self.value, other.value))

    def __truediv__(self, other: FieldElement) -> FieldElement:
        self._same(other)
        return self * other.inverse()

    def __neg__(self) -> FieldElement:
        return self

    def inverse(self) -> FieldElement:
        return FieldElement(self.ctx, self.ctx.inv(self.value))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx.m, self.ctx.reduction_poly, self.value))

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"FieldElement({self.value}, m={self.ctx.m})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def uniform_element(ctx: FieldContext, rng: np.random.Generator) -> FieldElement:
    """Uniform draw over all q elements, zero included."""
    return FieldElement(ctx, int(rng.integers(0, ctx.q)))
