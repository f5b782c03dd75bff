"""Arithmetic symbols: Kronecker, the theta multiplier and the restricted Mennicke symbol."""

from __future__ import annotations

import random
from fractions import Fraction

from .cocycle import context
from .errors import HermiError, PreconditionError
from .groups import GroupMatrix, MennickePair
from .iquad import QuadInt, ideal_coprime

__all__ = [
    "kronecker",
    "jacobi",
    "legendre_enumerated",
    "jacobi_enumerated",
    "rule_suite",
    "theta_eval",
    "theta_tail_bound",
    "theta_multiplier",
    "mennicke_restricted",
    "curly",
    "ms1_moves",
    "ms1_invariance_check",
    "curly_relation_check",
]


def jacobi(c: int, n: int) -> int:
    """Jacobi symbol ``(c/n)`` for odd positive ``n``."""
    if n <= 0 or n % 2 == 0:
        raise PreconditionError(f"Jacobi symbol needs an odd positive modulus, got {n}")
    c %= n
    acc = 1
    while c:
        while c % 2 == 0:
            c //= 2
            if n % 8 in (3, 5):
                acc = -acc
        c, n = n, c
        if c % 4 == 3 and n % 4 == 3:
            acc = -acc
        c %= n
    return acc if n == 1 else 0


def kronecker(c: int, d: int) -> int:
    """Kronecker symbol ``(c/d)``.

    ``(c/-1)`` is the sign of ``c`` (with ``(0/-1) = 1``), ``(c/2)`` is 0 for
    even ``c`` and otherwise ``(-1)^((c^2-1)/8)``, and ``(c/0) = 1`` iff
    ``c = +-1``.
    """
    if c == 0 and d == 0:
        raise PreconditionError("(0/0) is undefined")
    if d == 0:
        return 1 if abs(c) == 1 else 0
    acc = 1
    if d < 0:
        d = -d
        if c < 0:
            acc = -1
    v = 0
    while d % 2 == 0:
        d //= 2
        v += 1
    if v:
        if c % 2 == 0:
            return 0
        if v % 2 and c % 8 in (3, 5):
            acc = -acc
    return acc * jacobi(c, d)


# independent oracles -----------------------------------------------------

def legendre_enumerated(c: int, p: int) -> int:
    """Legendre symbol by listing the squares modulo an odd prime ``p``."""
    c %= p
    if c == 0:
        return 0
    squares = {x * x % p for x in range(1, p)}
    return 1 if c in squares else -1


def _factor(n: int) -> list[tuple[int, int]]:
    out = []
    f = 2
    while f * f <= n:
        e = 0
        while n % f == 0:
            n //= f
            e += 1
        if e:
            out.append((f, e))
        f += 1 if f == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def jacobi_enumerated(c: int, n: int) -> int:
    """Jacobi symbol for odd positive ``n`` via factoring and residue lists."""
    if n <= 0 or n % 2 == 0:
        raise PreconditionError("odd positive modulus required")
    acc = 1
    for p, e in _factor(n):
        acc *= legendre_enumerated(c, p) ** e
    return acc


# rule suite ---------------------------------------------------------------

def _odd(rng, lo: int, hi: int) -> int:
    while True:
        x = rng.randint(lo, hi)
        if x % 2:
            return x


def _nonzero(rng, lo: int, hi: int) -> int:
    while True:
        x = rng.randint(lo, hi)
        if x:
            return x


def _gcd(a: int, b: int) -> int:
    from math import gcd
    return gcd(a, b)


def _sl2_level(rng, q: int, bound: int = 60):
    """Random ``(a b; c d)`` in Gamma_1[q] with ``c != 0``."""
    while True:
        c = q * _nonzero(rng, -bound // q or -1, bound // q or 1)
        d = 1 + q * rng.randint(-bound // q, bound // q)
        if _gcd(c, d) != 1:
            continue
        # a d - b c = 1 with a = 1 mod q, b = 0 mod q
        for k in range(-abs(c) * q, abs(c) * q + 1):
            a = 1 + q * k
            if (a * d - 1) % c == 0 and ((a * d - 1) // c) % q == 0:
                return a, (a * d - 1) // c, c, d


def rule_suite(samples: int = 500, seed: int = 0, bound: int = 10_000) -> dict[str, dict]:
    """Randomised check of the Kronecker symbol rules.

    Returns ``{rule: {"checked": n, "violations": [...]}}``; a rule passes
    when its violation list is empty.  Every rule is sampled with ``c != 0``
    and odd lower entries; the individual side conditions are enforced by
    construction.
    """
    report: dict[str, dict] = {}

    def run(name, gen, check):
        rng = random.Random(f"{seed}:{name}")
        bad = []
        for _ in range(samples):
            args = gen(rng)
            if not check(*args):
                bad.append(args)
        report[name] = {"checked": samples, "violations": bad}

    B = bound
    run("multiplicative_top",
        lambda r: (_nonzero(r, -B, B), _nonzero(r, -B, B), _odd(r, -B, B)),
        lambda c1, c2, d: kronecker(c1 * c2, d) == kronecker(c1, d) * kronecker(c2, d))
    run("multiplicative_bottom",
        lambda r: (_nonzero(r, -B, B), _odd(r, -B, B), _odd(r, -B, B)),
        lambda c, d1, d2: kronecker(c, d1 * d2) == kronecker(c, d1) * kronecker(c, d2))

    def gen_recip(r):
        while True:
            m, n = _odd(r, -B, B), _odd(r, 1, B)
            if r.random() < 0.5:
                m, n = n, m
            if _gcd(m, n) == 1:
                return m, n
    run("reciprocity", gen_recip,
        lambda m, n: kronecker(m, n) * kronecker(n, m)
        == (-1) ** (((m - 1) // 2) * ((n - 1) // 2)))

    def gen_ptop(r):
        while True:
            d = _odd(r, -B, B)
            c1 = _nonzero(r, -B, B)
            c2 = c1 + d * r.randint(-50, 50)
            if c2 != 0 and (d > 0 or c1 * c2 > 0):
                return c1, c2, d
    run("periodic_top", gen_ptop,
        lambda c1, c2, d: kronecker(c1, d) == kronecker(c2, d))

    def gen_pbot(residue):
        def gen(r):
            while True:
                c = 4 * _nonzero(r, -B // 4, B // 4) + (2 if residue == 2 else 0)
                if c == 0:
                    continue
                d1 = _odd(r, -B, B)
                d2 = d1 + 4 * c * r.randint(-50, 50)
                return c, d1, d2
        return gen
    run("periodic_bottom_c0mod4", gen_pbot(0),
        lambda c, d1, d2: kronecker(c, d1) == kronecker(c, d2))
    run("periodic_bottom_c2mod4", gen_pbot(2),
        lambda c, d1, d2: kronecker(c, d1) == kronecker(c, d2))
    run("minus_one",
        lambda r: (_nonzero(r, -B, B),),
        lambda c: kronecker(c, -1) == (1 if c > 0 else -1))

    def gen_row(r):
        return _sl2_level(r, 4)
    run("level4_row",
        gen_row,
        lambda a, b, c, d: kronecker(c, a * d) == 1 and kronecker(c, a) == kronecker(c, d))
    return report


def rule_suite_passed(report: dict[str, dict]) -> bool:
    return all(not v["violations"] for v in report.values())


# theta ---------------------------------------------------------------------

def theta_tail_bound(y: float, T: int) -> float:
    """Upper bound of ``sum_{n > T} 2 exp(-2 pi n^2 y)``."""
    import math
    first = 2 * math.exp(-2 * math.pi * (T + 1) ** 2 * y)
    ratio = math.exp(-2 * math.pi * (2 * T + 3) * y)
    return first / (1 - ratio)


def theta_eval(z, T: int = 40, y_min: float = 0.3, prec: int = 128):
    """``1 + 2 sum_{n=1}^T exp(2 pi i n^2 z)`` in mpmath at ``prec`` bits."""
    ctx = context(prec)
    z = ctx.mpc(z)
    if ctx.im(z) < y_min:
        raise PreconditionError(f"Im z = {float(ctx.im(z))} is below {y_min}")
    q = ctx.exp(2 * ctx.pi * ctx.mpc(0, 1) * z)
    acc = ctx.mpc(1)
    # q^(n^2) built incrementally: q^((n+1)^2) = q^(n^2) * q^(2n+1)
    term = q
    step = q ** 3
    q2 = q * q
    for _ in range(T):
        acc += 2 * term
        term *= step
        step *= q2
    return acc


def _as_int_2x2(m) -> tuple[int, int, int, int]:
    if isinstance(m, GroupMatrix):
        vals = [x.rational() for r in m.rows for x in r]
    else:
        vals = [Fraction(x) for r in m for x in r]
    if any(v.denominator != 1 for v in vals):
        raise PreconditionError("theta multiplier needs an integral matrix")
    a, b, c, d = (int(v) for v in vals)
    if a * d - b * c != 1:
        raise PreconditionError("determinant must be 1")
    return a, b, c, d


def theta_multiplier(m, z, T: int = 40, prec: int = 128, tail_tol: float = 2.0 ** -50,
                     check: bool = True):
    """``theta(mz) / ((cz + d)^(1/2) theta(z))`` with the principal square root.

    ``m`` must be congruent to the identity modulo 4 with ``c != 0``.  With
    ``check`` the result is required to lie within 1e-8 of ``(c/d)``.
    """
    a, b, c, d = _as_int_2x2(m)
    if (a - 1) % 4 or b % 4 or c % 4 or (d - 1) % 4:
        raise PreconditionError("matrix must be congruent to E mod 4")
    if c == 0:
        raise PreconditionError("c = 0 is excluded")
    ctx = context(prec)
    z = ctx.mpc(z)
    j = c * z + d
    if abs(ctx.arg(j)) > ctx.pi - ctx.mpf("1e-6"):
        raise HermiError("cz + d is too close to the negative real axis")
    mz = (a * z + b) / j
    y = float(ctx.im(mz))
    if theta_tail_bound(y, T) > tail_tol:
        raise PreconditionError(f"Im(mz) = {y} is too small for truncation order {T}")
    val = theta_eval(mz, T, y_min=0.0, prec=prec) / (ctx.sqrt(j) * theta_eval(z, T, 0.0, prec))
    if check:
        k = kronecker(c, d)
        if abs(val - k) > 1e-8:
            raise HermiError(f"theta multiplier {complex(val)} does not match ({c}/{d}) = {k}")
    return val


# Mennicke symbol -----------------------------------------------------------

def curly(c: int, d: int) -> int:
    """The curly symbol on rational pairs, realised by the Kronecker symbol."""
    return kronecker(c, d)


def _rational_a(p: MennickePair) -> int:
    if not p.a.is_rational():
        raise PreconditionError("the restricted symbol needs a rational first entry")
    return p.a.dot


def mennicke_restricted(p: MennickePair) -> int:
    """``[c/a] = (N(c)/a)`` for pairs with rational ``a``."""
    return kronecker(p.c.norm(), _rational_a(p))


def ms1_moves(p: MennickePair, x: QuadInt, y: QuadInt) -> dict[str, str]:
    """Status (``pass``/``fail``/``skip``) of the two invariance moves.

    ``(a, c) -> (a + x c, c)`` is skipped unless ``a + x c`` stays rational;
    ``(a, c) -> (a, c + q a y)`` always stays in the domain.
    """
    base = mennicke_restricted(p)
    q = p.level.q
    out = {}
    a2 = p.a + x * p.c
    if a2.is_rational():
        out["move_a"] = "pass" if mennicke_restricted(MennickePair(a2, p.c, p.level)) == base else "fail"
    else:
        out["move_a"] = "skip"
    c2 = p.c + p.a * y * q
    out["move_c"] = "pass" if mennicke_restricted(MennickePair(p.a, c2, p.level)) == base else "fail"
    return out


def ms1_invariance_check(p: MennickePair, x: QuadInt, y: QuadInt) -> bool:
    """True unless one of the in-domain moves changes the symbol."""
    return "fail" not in ms1_moves(p, x, y).values()


def curly_relation_check(c1: QuadInt, c2: int, a: int, level: int | None = None) -> bool:
    """``[c1/a] {c2/a} == {N(c1) c2 / a}``."""
    if level is not None:
        if (a - 1) % level or c1.mod_int(level) != (0, 0):
            raise PreconditionError("arguments outside the restricted domain")
        if not ideal_coprime(c1.order(a), c1):
            raise PreconditionError("a and c1 are not coprime")
    n = c1.norm()
    return kronecker(n, a) * kronecker(c2, a) == kronecker(n * c2, a)
