"""Matrix groups over the order and its fraction field.

Covers the unitary relation ``conj(M)^T I M = I``, principal congruence
subgroups of level ``q o``, the embeddings ``iota``, ``iota1``, ``iota2``, the
Siegel-parabolic character, standard generators and the completion of
Mennicke pairs to matrices in ``SL(2, o)[q]``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Sequence

from .errors import PreconditionError
from .iquad import (OrderDesc, QuadInt, QuadRat, exact_quotient, ideal_coprime,
                    make_order, units)
from .lattice import reduce_mod_lattice, solve_integer


def _perm_sign(p: Sequence[int]) -> int:
    s = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


class GroupMatrix:
    """Square matrix with exact entries in F; hashable and immutable."""

    __slots__ = ("order", "rows", "_hash")

    def __init__(self, order: OrderDesc, rows: Iterable[Iterable]):
        self.order = order
        self.rows = tuple(tuple(QuadRat.lift(x, order) for x in r) for r in rows)
        size = len(self.rows)
        if any(len(r) != size for r in self.rows):
            raise PreconditionError("matrix must be square")
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def identity(cls, order: OrderDesc, size: int) -> "GroupMatrix":
        return cls(order, [[int(i == j) for j in range(size)] for i in range(size)])

    @classmethod
    def from_blocks(cls, A: "GroupMatrix", B: "GroupMatrix",
                    C: "GroupMatrix", D: "GroupMatrix") -> "GroupMatrix":
        rows = [ra + rb for ra, rb in zip(A.rows, B.rows)]
        rows += [rc + rd for rc, rd in zip(C.rows, D.rows)]
        return cls(A.order, rows)

    # basic properties ---------------------------------------------------
    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        """Degree: half of the matrix size."""
        return self.size // 2

    def __getitem__(self, ij) -> QuadRat:
        i, j = ij
        return self.rows[i][j]

    def block(self, bi: int, bj: int) -> "GroupMatrix":
        n = self.n
        return GroupMatrix(self.order, [r[bj * n:(bj + 1) * n]
                                        for r in self.rows[bi * n:(bi + 1) * n]])

    def blocks(self):
        """``(A, B, C, D)`` for ``M = (A B; C D)``."""
        return self.block(0, 0), self.block(0, 1), self.block(1, 0), self.block(1, 1)

    def is_integral(self) -> bool:
        return all(x.is_integral() for r in self.rows for x in r)

    def is_rational(self) -> bool:
        return all(x.is_rational() for r in self.rows for x in r)

    def is_identity(self) -> bool:
        return all((x.is_one() if i == j else x.is_zero())
                   for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.rows for x in r)

    # algebra ------------------------------------------------------------
    def __matmul__(self, other: "GroupMatrix") -> "GroupMatrix":
        if not isinstance(other, GroupMatrix):
            return NotImplemented
        if other.order.d != self.order.d or other.size != self.size:
            raise PreconditionError("incompatible matrices")
        cols = list(zip(*other.rows))
        zero = QuadRat(self.order.zero)
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = zero
                for x, y in zip(r, c):
                    if not (x.is_zero() or y.is_zero()):
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return GroupMatrix(self.order, out)

    __mul__ = __matmul__

    def __add__(self, other: "GroupMatrix") -> "GroupMatrix":
        return GroupMatrix(self.order, [[x + y for x, y in zip(r, s)]
                                        for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "GroupMatrix") -> "GroupMatrix":
        return GroupMatrix(self.order, [[x - y for x, y in zip(r, s)]
                                        for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "GroupMatrix":
        return GroupMatrix(self.order, [[-x for x in r] for r in self.rows])

    def scale(self, s) -> "GroupMatrix":
        return GroupMatrix(self.order, [[x * s for x in r] for r in self.rows])

    def __pow__(self, k: int) -> "GroupMatrix":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = GroupMatrix.identity(self.order, self.size)
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def transpose(self) -> "GroupMatrix":
        return GroupMatrix(self.order, zip(*self.rows))

    def conj(self) -> "GroupMatrix":
        return GroupMatrix(self.order, [[x.conj() for x in r] for r in self.rows])

    def conj_transpose(self) -> "GroupMatrix":
        return GroupMatrix(self.order, [[x.conj() for x in r] for r in zip(*self.rows)])

    H = property(conj_transpose)

    def trace(self) -> QuadRat:
        acc = QuadRat(self.order.zero)
        for i in range(self.size):
            acc = acc + self.rows[i][i]
        return acc

    def det(self) -> QuadRat:
        size = self.size
        if size == 1:
            return self.rows[0][0]
        if size == 2:
            (a, b), (c, d) = self.rows
            return a * d - b * c
        if size <= 4:
            acc = QuadRat(self.order.zero)
            for p in permutations(range(size)):
                term = QuadRat(self.order.one) * _perm_sign(p)
                for i, j in enumerate(p):
                    term = term * self.rows[i][j]
                    if term.is_zero():
                        break
                acc = acc + term
            return acc
        # Gaussian elimination over F for larger sizes.
        rows = [list(r) for r in self.rows]
        det = QuadRat(self.order.one)
        for c in range(size):
            piv = next((i for i in range(c, size) if not rows[i][c].is_zero()), None)
            if piv is None:
                return QuadRat(self.order.zero)
            if piv != c:
                rows[c], rows[piv] = rows[piv], rows[c]
                det = -det
            det = det * rows[c][c]
            inv = rows[c][c].inverse()
            for i in range(c + 1, size):
                f = rows[i][c] * inv
                if not f.is_zero():
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
        return det

    def inverse(self) -> "GroupMatrix":
        size = self.size
        if size == 2:
            (a, b), (c, d) = self.rows
            det = a * d - b * c
            if det.is_zero():
                raise PreconditionError("singular matrix")
            inv = det.inverse()
            return GroupMatrix(self.order, [[d * inv, -b * inv], [-c * inv, a * inv]])
        one, zero = QuadRat(self.order.one), QuadRat(self.order.zero)
        aug = [list(r) + [one if i == j else zero for j in range(size)]
               for i, r in enumerate(self.rows)]
        for c in range(size):
            piv = next((i for i in range(c, size) if not aug[i][c].is_zero()), None)
            if piv is None:
                raise PreconditionError("singular matrix")
            aug[c], aug[piv] = aug[piv], aug[c]
            inv = aug[c][c].inverse()
            aug[c] = [x * inv for x in aug[c]]
            for i in range(size):
                if i != c and not aug[i][c].is_zero():
                    f = aug[i][c]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
        return GroupMatrix(self.order, [r[size:] for r in aug])

    # comparison ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupMatrix):
            return NotImplemented
        return self.order.d == other.order.d and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.order.d, self.rows))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"GroupMatrix(d={self.order.d}, [{body}])"

    # serialization ------------------------------------------------------
    def to_json(self) -> list[list[str]]:
        return [[format_entry(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, order: OrderDesc, data) -> "GroupMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
            raise ValueError("matrix JSON must be a non-empty array of arrays")
        return cls(order, [[parse_entry(order, x) for x in r] for r in data])


# entry I/O ---------------------------------------------------------------

def format_entry(x: QuadRat) -> str:
    """``"dot/den+ddot/den*w"`` with both coefficients written out."""
    a, b = x.coords()
    sign = "-" if b < 0 else "+"
    return f"{a.numerator}/{a.denominator}{sign}{abs(b.numerator)}/{b.denominator}*w"


_TERM = re.compile(r"\s*([+-]?)\s*([0-9]+(?:/[0-9]+)?)?\s*(\*?\s*w)?\s*")


def parse_entry(order: OrderDesc, text) -> QuadRat:
    """Parse ``"a/b+c/e*w"`` style strings (also bare ints, ``"w"``, ``"-2*w"``)."""
    if isinstance(text, int) and not isinstance(text, bool):
        return QuadRat.lift(text, order)
    if not isinstance(text, str) or not text.strip():
        raise ValueError(f"bad matrix entry {text!r}")
    s = text.strip()
    pos = 0
    real = Fraction(0)
    imag = Fraction(0)
    seen = False
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"bad matrix entry {text!r}")
        if seen and not m.group(1):
            raise ValueError(f"bad matrix entry {text!r}")
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(1) == "-":
            coef = -coef
        if m.group(3):
            if m.group(2) and "*" not in m.group(3):
                raise ValueError(f"bad matrix entry {text!r}")
            imag += coef
        else:
            real += coef
        seen = True
        pos = m.end()
    return QuadRat.from_fractions(order, real, imag)


def load_matrix(order: OrderDesc, source: str) -> GroupMatrix:
    """``source`` is inline JSON or a path to a JSON file."""
    text = source
    if not source.lstrip().startswith("["):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    return GroupMatrix.from_json(order, json.loads(text))


# levels and pairs ---------------------------------------------------------

@dataclass(frozen=True)
class LevelIdeal:
    """The principal level ideal ``q o`` for a rational ``q``."""

    q: int

    def __post_init__(self):
        if not isinstance(self.q, int) or self.q <= 0 or self.q % 4:
            raise PreconditionError(f"level must be a positive multiple of 4, got {self.q!r}")


def _as_level(level) -> LevelIdeal:
    return level if isinstance(level, LevelIdeal) else LevelIdeal(level)


def only_unit_one(order: OrderDesc, level) -> bool:
    """True iff 1 is the only unit congruent to 1 modulo the level."""
    q = _as_level(level).q
    return [u for u in units(order) if u.is_congruent(1, q)] == [order.one]


@dataclass(frozen=True)
class MennickePair:
    """Coprime ``(a, c)`` with ``a = 1`` and ``c = 0`` modulo ``q o``."""

    a: QuadInt
    c: QuadInt
    level: LevelIdeal

    def __post_init__(self):
        if not isinstance(self.level, LevelIdeal):
            object.__setattr__(self, "level", LevelIdeal(self.level))
        q = self.level.q
        if self.a.order.d != self.c.order.d:
            raise PreconditionError("mixed discriminants in pair")
        if not self.a.is_congruent(1, q):
            raise PreconditionError(f"a = {self.a} is not 1 mod {q}")
        if not self.c.is_congruent(0, q):
            raise PreconditionError(f"c = {self.c} is not 0 mod {q}")
        if not ideal_coprime(self.a, self.c):
            raise PreconditionError(f"({self.a}, {self.c}) is not a coprime pair")

    @property
    def order(self) -> OrderDesc:
        return self.a.order


# predicates ----------------------------------------------------------------

def alternating(order: OrderDesc, n: int) -> GroupMatrix:
    """``I = (0 -E; E 0)`` of size 2n."""
    rows = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        rows[i][n + i] = -1
        rows[n + i][i] = 1
    return GroupMatrix(order, rows)


def is_unitary(M: GroupMatrix) -> bool:
    if M.size % 2:
        raise PreconditionError("unitary test needs an even-sized matrix")
    J = alternating(M.order, M.n)
    return M.conj_transpose() @ J @ M == J


def _require_integral(M: GroupMatrix) -> None:
    if not M.is_integral():
        raise PreconditionError("matrix has non-integral entries")


def in_congruence(M: GroupMatrix, level) -> bool:
    """``M = E`` entrywise modulo ``q o``."""
    q = _as_level(level).q
    _require_integral(M)
    for i, r in enumerate(M.rows):
        for j, x in enumerate(r):
            if not x.to_quadint().is_congruent(int(i == j), q):
                return False
    return True


def is_hermitian(S: GroupMatrix) -> bool:
    return S == S.conj_transpose()


# embeddings -----------------------------------------------------------------

def iota(U: GroupMatrix) -> GroupMatrix:
    """``U -> diag(conj(U)^T^-1, U)`` from GL(2, F) into U(2, 2)."""
    if U.size != 2:
        raise PreconditionError("iota expects a 2x2 matrix")
    if U.det().is_zero():
        raise PreconditionError("iota expects an invertible matrix")
    A = U.conj_transpose().inverse()
    Z = GroupMatrix(U.order, [[0, 0], [0, 0]])
    return GroupMatrix.from_blocks(A, Z, Z, U)


def _check_sl2(m: GroupMatrix) -> None:
    if m.size != 2:
        raise PreconditionError("expected a 2x2 matrix")
    if not m.det().is_one():
        raise PreconditionError("expected determinant 1")
    if not is_unitary(m):
        raise PreconditionError("matrix does not lie in U(1,1)")


def iota1(m: GroupMatrix) -> GroupMatrix:
    _check_sl2(m)
    (a, b), (c, d) = m.rows
    return GroupMatrix(m.order, [[a, 0, b, 0], [0, 1, 0, 0], [c, 0, d, 0], [0, 0, 0, 1]])


def iota2(m: GroupMatrix) -> GroupMatrix:
    _check_sl2(m)
    (a, b), (c, d) = m.rows
    return GroupMatrix(m.order, [[1, 0, 0, 0], [0, a, 0, b], [0, 0, 1, 0], [0, c, 0, d]])


def swap_matrix(order: OrderDesc) -> GroupMatrix:
    """The permutation matrix exchanging the two coordinate pairs."""
    return GroupMatrix(order, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def iota_image_index(M: GroupMatrix) -> int | None:
    """1 or 2 if ``M`` has the shape of an ``iota1``/``iota2`` image, else None."""
    if M.size != 4:
        return None
    r = M.rows
    zero = lambda x: x.is_zero()
    one = lambda x: x.is_one()
    if (one(r[1][1]) and one(r[3][3])
            and all(zero(r[i][j]) for i in range(4) for j in (1, 3) if i != j)
            and all(zero(r[i][j]) for i in (1, 3) for j in range(4) if i != j)):
        return 1
    if (one(r[0][0]) and one(r[2][2])
            and all(zero(r[i][j]) for i in range(4) for j in (0, 2) if i != j)
            and all(zero(r[i][j]) for i in (0, 2) for j in range(4) if i != j)):
        return 2
    return None


def iota_preimage(M: GroupMatrix) -> tuple[int, GroupMatrix] | None:
    k = iota_image_index(M)
    if k is None:
        return None
    i, j = (0, 2) if k == 1 else (1, 3)
    r = M.rows
    return k, GroupMatrix(M.order, [[r[i][i], r[i][j]], [r[j][i], r[j][j]]])


# Siegel parabolic ------------------------------------------------------------

def is_siegel_parabolic(M: GroupMatrix) -> bool:
    return M.block(1, 0).is_zero()


def epsilon(M: GroupMatrix) -> QuadRat:
    """``det(D)`` for ``M = (A B; 0 D)``."""
    if not is_siegel_parabolic(M):
        raise PreconditionError("epsilon is defined on the Siegel parabolic (C = 0) only")
    return M.block(1, 1).det()


def upper_translation(S: GroupMatrix) -> GroupMatrix:
    if not is_hermitian(S):
        raise PreconditionError("translation needs a Hermitian S")
    E = GroupMatrix.identity(S.order, S.size)
    Z = GroupMatrix(S.order, [[0] * S.size for _ in range(S.size)])
    return GroupMatrix.from_blocks(E, S, Z, E)


def lower_translation(S: GroupMatrix) -> GroupMatrix:
    if not is_hermitian(S):
        raise PreconditionError("translation needs a Hermitian S")
    E = GroupMatrix.identity(S.order, S.size)
    Z = GroupMatrix(S.order, [[0] * S.size for _ in range(S.size)])
    return GroupMatrix.from_blocks(E, Z, S, E)


def translation_part(M: GroupMatrix, lower: bool = False) -> GroupMatrix | None:
    """``S`` if ``M`` is ``(E S; 0 E)`` (or ``(E 0; S E)`` with ``lower``)."""
    if M.size % 2:
        return None
    A, B, C, D = M.blocks()
    if not (A.is_identity() and D.is_identity()):
        return None
    if lower:
        return C if B.is_zero() else None
    return B if C.is_zero() else None


def hermitian_basis(order: OrderDesc, n: int = 2) -> list[GroupMatrix]:
    """Z-basis of the integral Hermitian n x n matrices."""
    out = []
    w = order.omega
    for i in range(n):
        rows = [[0] * n for _ in range(n)]
        rows[i][i] = 1
        out.append(GroupMatrix(order, rows))
    for i in range(n):
        for j in range(i + 1, n):
            for z in (order.one, w):
                rows = [[0] * n for _ in range(n)]
                rows[i][j] = z
                rows[j][i] = z.conj()
                out.append(GroupMatrix(order, rows))
    return out


def standard_generators(n: int, level, order: OrderDesc | None = None) -> dict[str, GroupMatrix]:
    """Named generators: translations by ``q``-scaled Hermitian basis matrices.

    Degree 1 gives ``(1 q; 0 1)`` and ``(1 0; q 1)``.  Degree 2 adds ``I``,
    the swap matrix ``P``, and ``iota`` of the elementary level-``q``
    matrices with entries ``q`` and ``q w``.
    """
    q = _as_level(level).q
    order = order or make_order(-4)
    if n == 1:
        return {
            "T": GroupMatrix(order, [[1, q], [0, 1]]),
            "L": GroupMatrix(order, [[1, 0], [q, 1]]),
        }
    if n != 2:
        raise PreconditionError(f"unsupported degree {n}")
    gens = {"I": alternating(order, 2), "P": swap_matrix(order)}
    for k, S in enumerate(hermitian_basis(order, 2)):
        gens[f"T{k}"] = upper_translation(S.scale(q))
        gens[f"L{k}"] = lower_translation(S.scale(q))
    for name, z in (("1", order.one * q), ("w", order.omega * q)):
        gens[f"U{name}"] = iota(GroupMatrix(order, [[1, z], [0, 1]]))
        gens[f"V{name}"] = iota(GroupMatrix(order, [[1, 0], [z, 1]]))
    return gens


def congruence_generators(n: int, level, order: OrderDesc | None = None) -> dict[str, GroupMatrix]:
    """The subset of :func:`standard_generators` lying in the level-q subgroup."""
    gens = standard_generators(n, level, order)
    return {k: g for k, g in gens.items() if in_congruence(g, level)}


def random_word(gens: dict[str, GroupMatrix], rng, max_len: int = 6) -> GroupMatrix:
    """Product of 1..max_len random generators or their inverses."""
    names = sorted(gens)
    inverses = {k: gens[k].inverse() for k in names}
    first = gens[names[0]]
    M = GroupMatrix.identity(first.order, first.size)
    for _ in range(rng.randint(1, max_len)):
        k = rng.choice(names)
        M = M @ (gens[k] if rng.random() < 0.5 else inverses[k])
    return M


# pair completion ----------------------------------------------------------

def complete_pair(p: MennickePair) -> GroupMatrix:
    """Matrix ``(a b; c d)`` in ``SL(2, o)[q]`` with first column ``(a, c)``.

    Solves ``a d - c b = 1`` over integer coordinates, moves ``b`` into
    ``q o`` by a right factor ``(1 t; 0 1)`` and then takes the canonical
    representative of ``b`` modulo ``q a o``.
    """
    a, c, q = p.a, p.c, p.level.q
    o = a.order
    w = o.omega
    # columns: a*1, a*w (coefficients of d) and -c*1, -c*w (coefficients of b)
    gens = [a, a * w, -c, -(c * w)]
    sol = solve_integer([[g.dot for g in gens], [g.ddot for g in gens]], (1, 0))
    if sol is None:
        raise PreconditionError("pair does not generate the unit ideal")
    b = QuadInt(sol[2], sol[3], o)
    b = b - b * a  # b(1 - a) lies in q o since a = 1 mod q
    lat = [a * q, a * q * w]
    rep = reduce_mod_lattice(b.coords(), [[x.dot for x in lat], [x.ddot for x in lat]])
    b = QuadInt(rep[0], rep[1], o)
    d = exact_quotient(b * c + 1, a)
    if d is None:
        raise PreconditionError("pair completion failed; invariants violated")
    M = GroupMatrix(o, [[a, b], [c, d]])
    assert M.det().is_one()
    return M
