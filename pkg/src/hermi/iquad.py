"""Exact arithmetic in the ring of integers of an imaginary quadratic field.

Elements of the order ``o = Z + Z w`` with ``w = (d + sqrt(d)) / 2`` are stored
by their two integer coordinates.  Multiplication uses ``w^2 = -N(w) + d w``.
Elements of the field itself (needed for inverse matrices) are ``QuadRat``:
an integral numerator over a positive rational denominator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, Union

from .errors import PreconditionError, SearchExhausted
from .lattice import solve_integer

__all__ = [
    "OrderDesc",
    "QuadInt",
    "QuadRat",
    "make_order",
    "content",
    "ideal_coprime",
    "abx_search",
    "split_prime_search",
    "is_prime",
    "units",
    "rational_part_min",
]


def _squarefree(n: int) -> bool:
    n = abs(n)
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class OrderDesc:
    """The ring of integers of Q(sqrt(d)) for a negative fundamental discriminant d."""

    d: int

    @property
    def omega_norm(self) -> int:
        return (self.d * self.d - self.d) // 4

    @property
    def omega_trace(self) -> int:
        return self.d

    def __call__(self, dot: int = 0, ddot: int = 0) -> "QuadInt":
        return QuadInt(dot, ddot, self)

    @property
    def one(self) -> "QuadInt":
        return QuadInt(1, 0, self)

    @property
    def zero(self) -> "QuadInt":
        return QuadInt(0, 0, self)

    @property
    def omega(self) -> "QuadInt":
        return QuadInt(0, 1, self)

    def omega_complex(self) -> complex:
        return complex(self.d / 2, math.sqrt(-self.d) / 2)


@lru_cache(maxsize=None)
def make_order(d: int) -> OrderDesc:
    """Validate ``d`` as a negative fundamental discriminant and describe its order."""
    if not isinstance(d, int) or d >= 0:
        raise PreconditionError(f"discriminant must be a negative integer, got {d!r}")
    if d % 4 == 1:
        ok = _squarefree(d)
    elif d % 4 == 0:
        m = d // 4
        ok = m % 4 in (2, 3) and _squarefree(m)
    else:
        ok = False
    if not ok:
        raise PreconditionError(f"{d} is not a fundamental discriminant")
    return OrderDesc(d)


def _check_same(x: "QuadInt", y: "QuadInt") -> None:
    if x.order.d != y.order.d:
        raise PreconditionError(
            f"mixed discriminants {x.order.d} and {y.order.d}")


@dataclass(frozen=True, eq=False)
class QuadInt:
    """``dot + ddot * w`` in the order ``order``."""

    dot: int
    ddot: int
    order: OrderDesc

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadInt):
            return (self.dot == other.dot and self.ddot == other.ddot
                    and self.order.d == other.order.d)
        if isinstance(other, int):
            return self.ddot == 0 and self.dot == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.dot, self.ddot, self.order.d))

    def _coerce(self, other) -> "QuadInt":
        if isinstance(other, QuadInt):
            _check_same(self, other)
            return other
        if isinstance(other, int):
            return QuadInt(other, 0, self.order)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadInt(self.dot + o.dot, self.ddot + o.ddot, self.order)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadInt(self.dot - o.dot, self.ddot - o.ddot, self.order)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self) -> "QuadInt":
        return QuadInt(-self.dot, -self.ddot, self.order)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b, c, e = self.dot, self.ddot, o.dot, o.ddot
        bd = b * e
        return QuadInt(a * c - bd * self.order.omega_norm,
                       a * e + b * c + bd * self.order.d, self.order)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QuadInt":
        if k < 0:
            raise ValueError("negative exponent")
        out = self.order.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "QuadInt":
        return QuadInt(self.dot + self.ddot * self.order.d, -self.ddot, self.order)

    def norm(self) -> int:
        a, b = self.dot, self.ddot
        return a * a + a * b * self.order.d + b * b * self.order.omega_norm

    def trace(self) -> int:
        return 2 * self.dot + self.ddot * self.order.d

    def is_zero(self) -> bool:
        return self.dot == 0 and self.ddot == 0

    def is_rational(self) -> bool:
        return self.ddot == 0

    def coords(self) -> tuple[int, int]:
        return (self.dot, self.ddot)

    def divides(self, other: "QuadInt") -> bool:
        return exact_quotient(other, self) is not None

    def mod_int(self, q: int) -> tuple[int, int]:
        return (self.dot % q, self.ddot % q)

    def is_congruent(self, other: Union["QuadInt", int], q: int) -> bool:
        diff = self - other
        return diff.dot % q == 0 and diff.ddot % q == 0

    def __complex__(self) -> complex:
        return self.dot + self.ddot * self.order.omega_complex()

    def __str__(self) -> str:
        return _format_coords(Fraction(self.dot), Fraction(self.ddot))

    def __repr__(self) -> str:
        return f"QuadInt({self.dot}, {self.ddot}, d={self.order.d})"


def exact_quotient(x: QuadInt, y: QuadInt) -> QuadInt | None:
    """``x / y`` if it lies in the order, else ``None``."""
    _check_same(x, y)
    if y.is_zero():
        raise ZeroDivisionError("division by zero in the order")
    n = y.norm()
    t = x * y.conj()
    if t.dot % n or t.ddot % n:
        return None
    return QuadInt(t.dot // n, t.ddot // n, x.order)


def _format_coords(a: Fraction, b: Fraction) -> str:
    if b == 0:
        return str(a)
    if a == 0:
        return f"{b}*w"
    sign = "-" if b < 0 else "+"
    return f"{a}{sign}{abs(b)}*w"


class QuadRat:
    """Element of the field F: ``numerator / den`` with ``den >= 1``, fully reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num: QuadInt, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(math.gcd(num.dot, num.ddot), den)
        if g > 1:
            num = QuadInt(num.dot // g, num.ddot // g, num.order)
            den //= g
        self.num = num
        self.den = den

    @classmethod
    def from_fractions(cls, order: OrderDesc, a, b=0) -> "QuadRat":
        a, b = Fraction(a), Fraction(b)
        den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        return cls(QuadInt(int(a * den), int(b * den), order), den)

    @classmethod
    def lift(cls, x, order: OrderDesc) -> "QuadRat":
        if isinstance(x, QuadRat):
            _check_same(x.num, order.zero)
            return x
        if isinstance(x, QuadInt):
            _check_same(x, order.zero)
            return cls(x)
        if isinstance(x, (int, Fraction)):
            return cls.from_fractions(order, x)
        raise TypeError(f"cannot interpret {x!r} as a field element")

    @property
    def order(self) -> OrderDesc:
        return self.num.order

    def _coerce(self, other):
        if isinstance(other, QuadRat):
            _check_same(self.num, other.num)
            return other
        if isinstance(other, (QuadInt, int, Fraction)):
            return QuadRat.lift(other, self.order)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den == o.den:
            return QuadRat(self.num + o.num, self.den)
        return QuadRat(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self) -> "QuadRat":
        return QuadRat(-self.num, self.den)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return QuadRat(self.order.zero)
        return QuadRat(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "QuadRat":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        n = self.num.norm()
        return QuadRat(self.num.conj() * self.den, n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def conj(self) -> "QuadRat":
        return QuadRat(self.num.conj(), self.den)

    def norm(self) -> Fraction:
        return Fraction(self.num.norm(), self.den * self.den)

    def trace(self) -> Fraction:
        return Fraction(self.num.trace(), self.den)

    def coords(self) -> tuple[Fraction, Fraction]:
        return (Fraction(self.num.dot, self.den), Fraction(self.num.ddot, self.den))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.den == 1 and self.num.dot == 1 and self.num.ddot == 0

    def is_integral(self) -> bool:
        return self.den == 1

    def is_rational(self) -> bool:
        return self.num.ddot == 0

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num.dot, self.den)

    def to_quadint(self) -> QuadInt:
        if self.den != 1:
            raise ValueError(f"{self} is not integral")
        return self.num

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadRat):
            return (self.den == other.den and self.num.dot == other.num.dot
                    and self.num.ddot == other.num.ddot
                    and self.num.order.d == other.num.order.d)
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num.dot, self.den) == other
        if isinstance(other, QuadInt):
            return self == QuadRat(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num.dot, self.num.ddot, self.den, self.num.order.d))

    def __complex__(self) -> complex:
        return complex(self.num) / self.den

    def __str__(self) -> str:
        a, b = self.coords()
        return _format_coords(a, b)

    def __repr__(self) -> str:
        return f"QuadRat({self}, d={self.order.d})"


def units(order: OrderDesc) -> list[QuadInt]:
    """All units of the order (norm 1 elements)."""
    return [x for x in _box(order, 2) if x.norm() == 1]


def _box(order: OrderDesc, k: int) -> Iterator[QuadInt]:
    for a, b in product(range(-k, k + 1), repeat=2):
        yield QuadInt(a, b, order)


def content(x: QuadInt) -> int:
    """Largest natural number dividing ``x`` in the order."""
    if x.is_zero():
        raise PreconditionError("content of zero is undefined")
    return math.gcd(x.dot, x.ddot)


def _ideal_matrix(*gens: QuadInt) -> list[list[int]]:
    # Columns: coordinates of g and g*w for every generator g.
    cols = []
    for g in gens:
        cols.append(g.coords())
        cols.append((g * g.order.omega).coords())
    return [[c[0] for c in cols], [c[1] for c in cols]]


def ideal_coprime(a: QuadInt, b: QuadInt) -> bool:
    """True iff ``o a + o b = o``."""
    _check_same(a, b)
    if a.is_zero() and b.is_zero():
        raise PreconditionError("both arguments are zero")
    return solve_integer(_ideal_matrix(a, b), (1, 0)) is not None


def bezout(a: QuadInt, b: QuadInt) -> tuple[QuadInt, QuadInt] | None:
    """``(x, y)`` in the order with ``a x + b y = 1``, or ``None`` if not coprime."""
    _check_same(a, b)
    sol = solve_integer(_ideal_matrix(a, b), (1, 0))
    if sol is None:
        return None
    o = a.order
    return QuadInt(sol[0], sol[1], o), QuadInt(sol[2], sol[3], o)


def rational_part_min(c: QuadInt) -> int:
    """Smallest positive rational integer in the ideal ``c o``."""
    if c.is_zero():
        raise PreconditionError("zero ideal")
    n = c.norm()
    g = math.gcd(n, content(c.conj()))
    return n // g


def _shell(k: int) -> Iterator[tuple[int, int]]:
    # Pairs with max(|dot|, |ddot|) == k, ascending by dot then ddot.
    if k == 0:
        yield (0, 0)
        return
    for dot in range(-k, k + 1):
        if abs(dot) == k:
            for ddot in range(-k, k + 1):
                yield (dot, ddot)
        else:
            yield (dot, -k)
            yield (dot, k)


def abx_search(a: QuadInt, b: QuadInt, bound: int = 64, max_bound: int = 4096) -> QuadInt:
    """Find ``x`` with ``content(a + x b) == 1``.

    Candidates are scanned by max-norm of their coordinates, then by ``dot``
    and ``ddot``.  The search window starts at ``bound`` and doubles until
    ``max_bound``; :class:`SearchExhausted` is raised past that.
    """
    _check_same(a, b)
    o = a.order
    if b.is_zero():
        if a.is_zero() or content(a) != 1:
            raise PreconditionError(f"{a} is not primitive and b = 0")
        return o.zero
    if not ideal_coprime(a, b):
        raise PreconditionError(f"{a} and {b} do not generate the unit ideal")
    k = 0
    window = bound
    while True:
        while k <= window:
            for dot, ddot in _shell(k):
                x = QuadInt(dot, ddot, o)
                y = a + x * b
                if not y.is_zero() and content(y) == 1:
                    return x
            k += 1
        if window >= max_bound:
            raise SearchExhausted(f"no x with max-norm <= {window} makes a + x b primitive")
        window = min(2 * window, max_bound)


def elements_by_norm(order: OrderDesc, limit: int) -> list[QuadInt]:
    """Nonzero elements with norm <= ``limit``, sorted by (norm, dot, ddot)."""
    d, nw = order.d, order.omega_norm
    # N(x + y w) = (x + y d/2)^2 + y^2 |d| / 4
    ymax = math.isqrt(4 * limit // -d) + 1
    out = []
    for y in range(-ymax, ymax + 1):
        rest = 4 * limit + d * y * y  # 4 * limit - y^2 |d|
        if rest < 0:
            continue
        r = math.isqrt(rest) // 2 + 2
        centre = -(d * y) // 2
        for x in range(centre - r, centre + r + 1):
            n = x * x + x * y * d + y * y * nw
            if 0 < n <= limit:
                out.append(QuadInt(x, y, order))
    out.sort(key=lambda z: (z.norm(), z.dot, z.ddot))
    return out


def split_prime_search(order: OrderDesc, coprime_to: int = 1, limit: int = 10_000) -> QuadInt:
    """First element (by norm, then dot, then ddot) whose norm is a prime coprime to ``coprime_to``."""
    if coprime_to < 1:
        raise PreconditionError("coprime_to must be a positive integer")
    for c in elements_by_norm(order, limit):
        n = c.norm()
        if is_prime(n) and math.gcd(n, coprime_to) == 1:
            return c
    raise SearchExhausted(f"no prime norm coprime to {coprime_to} up to {limit}")
