"""Reproduction suites and the non-congruence witness.

Every suite returns a :class:`SuiteReport` that serializes to a small,
versioned JSON schema.  Randomness is derived per sample index from
``(seed, suite, case, index)`` so reports do not depend on evaluation order.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Callable

from .cocycle import (arg_continue, cocycle_identity_check, maass_case, maass_table,
                      w as w_cocycle, w1_closed, w_fast, HalfSpacePoint)
from .errors import PreconditionError
from .groups import (GroupMatrix, LevelIdeal, MennickePair, alternating, complete_pair,
                     congruence_generators, format_entry, in_congruence, iota, iota1, iota2,
                     lower_translation, parse_entry, random_word, standard_generators,
                     swap_matrix, upper_translation)
from .iquad import (OrderDesc, QuadInt, QuadRat, ideal_coprime, make_order,
                    rational_part_min, split_prime_search, units)
from .symbols import (curly, curly_relation_check, jacobi_enumerated, kronecker,
                      legendre_enumerated, mennicke_restricted, ms1_moves)

SCHEMA_VERSION = 1
MAX_DUMP = 5

WFunc = Callable[[GroupMatrix, GroupMatrix], int]


# reports --------------------------------------------------------------------

@dataclass
class SuiteReport:
    suite: str
    seed: int
    samples: int
    results: list[dict] = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return all(r["status"] != "fail" for r in self.results)

    def status(self, case: str) -> str:
        for r in self.results:
            if r["case"] == case:
                return r["status"]
        raise KeyError(case)

    def to_dict(self) -> dict:
        return {"schema_version": self.schema_version, "suite": self.suite,
                "seed": self.seed, "samples": self.samples, "results": self.results}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteReport":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {data.get('schema_version')!r}")
        for r in data["results"]:
            if set(r) != {"case", "status", "detail"} or r["status"] not in ("pass", "fail", "skip"):
                raise ValueError(f"malformed result entry {r!r}")
        return cls(data["suite"], data["seed"], data["samples"], list(data["results"]))


def _rng(seed, suite: str, case: str, index: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{case}:{index}")


def _mat(M: GroupMatrix) -> list:
    return M.to_json()


class _Case:
    """Accumulates one result entry."""

    def __init__(self, name: str):
        self.name = name
        self.checked = 0
        self.skipped = 0
        self.failures: list = []
        self.extra: dict = {}

    def record(self, ok: bool, dump=None):
        self.checked += 1
        if not ok:
            self.failures.append(dump)

    def result(self) -> dict:
        if self.checked == 0:
            status = "skip"
        else:
            status = "fail" if self.failures else "pass"
        detail = {"checked": self.checked, "failed": len(self.failures),
                  "counterexamples": self.failures[:MAX_DUMP]}
        if self.skipped:
            detail["skipped"] = self.skipped
        detail.update(self.extra)
        return {"case": self.name, "status": status, "detail": detail}


# samplers -------------------------------------------------------------------

def random_sl2z(rng: random.Random, length: int = 6) -> tuple:
    """Random word in the elementary generators of SL(2, Z)."""
    M = ((1, 0), (0, 1))
    for _ in range(rng.randint(0, length)):
        k = rng.randint(-3, 3)
        G = rng.choice([((1, k), (0, 1)), ((1, 0), (k, 1)), ((0, -1), (1, 0)), ((-1, 0), (0, -1))])
        M = tuple(tuple(sum(M[i][l] * G[l][j] for l in range(2)) for j in range(2))
                  for i in range(2))
    return M


def random_hermitian(order: OrderDesc, rng: random.Random, lo: int = -5, hi: int = 5) -> GroupMatrix:
    """2x2 Hermitian matrix with integer coordinates in ``[lo, hi]``."""
    a, b = rng.randint(lo, hi), rng.randint(lo, hi)
    z = order(rng.randint(lo, hi), rng.randint(lo, hi))
    return GroupMatrix(order, [[a, z], [z.conj(), b]])


def random_sl2o(order: OrderDesc, rng: random.Random, length: int = 4) -> GroupMatrix:
    """Random word in elementary matrices over the order."""
    M = GroupMatrix.identity(order, 2)
    for _ in range(rng.randint(0, length)):
        z = order(rng.randint(-2, 2), rng.randint(-2, 2))
        G = [[1, z], [0, 1]] if rng.random() < 0.5 else [[1, 0], [z, 1]]
        M = M @ GroupMatrix(order, G)
    return M


def random_parabolic(order: OrderDesc, rng: random.Random, eps_one: bool = True) -> GroupMatrix:
    """``iota(U) (E S; 0 E)``; with ``eps_one`` false ``det U`` is a random unit."""
    U = random_sl2o(order, rng)
    if not eps_one:
        u = rng.choice(units(order))
        U = U @ GroupMatrix(order, [[1, 0], [0, u]])
    return iota(U) @ upper_translation(random_hermitian(order, rng))


def _level_pair(order: OrderDesc, q: int, rng: random.Random, span: int = 12) -> MennickePair:
    """Random restricted-domain pair: rational ``a = 1 mod q``, ``c = 0 mod q``."""
    while True:
        a = order(1 + q * rng.randint(-span, span))
        c = order(rng.randint(-span, span), rng.randint(-span, span)) * q
        if not c.is_zero() and ideal_coprime(a, c):
            return MennickePair(a, c, LevelIdeal(q))


# lemma suite -----------------------------------------------------------------

def lemma_suite(seed: int = 0, sample_count: int = 100, order: OrderDesc | None = None,
                w_func: WFunc | None = None, prec: int | None = None) -> SuiteReport:
    """Cross-check every closed-form cocycle rule against continuation.

    ``w_func`` replaces the analytic oracle (used for fault injection).
    """
    order = order or make_order(-4)
    report = SuiteReport("lemmas", seed, sample_count)
    if sample_count <= 0:
        return report
    if w_func is None:
        def w_func(M, N):
            return w_cocycle(M, N, method="analytic", prec=prec).w
    S = "lemmas"
    n = sample_count
    I = alternating(order, 2)
    P = swap_matrix(order)
    gens = congruence_generators(2, 4, order)
    all_gens = standard_generators(2, 4, order)

    case = _Case("cocycle_identity")
    for i in range(n):
        rng = _rng(seed, S, case.name, i)
        Ms = [random_word(gens, rng) for _ in range(3)]
        ok = cocycle_identity_check(*Ms, w_func=w_func)
        case.record(ok, [_mat(M) for M in Ms])
    report.results.append(case.result())

    case = _Case("unit")
    for i in range(n):
        rng = _rng(seed, S, case.name, i)
        M = random_word(all_gens, rng)
        E = GroupMatrix.identity(order, 4)
        case.record(w_func(E, M) == 0 and w_func(M, E) == 0, _mat(M))
    report.results.append(case.result())

    case = _Case("maass_table")
    seen = set()
    for i in range(n):
        rng = _rng(seed, S, case.name, i)
        M, N = random_sl2z(rng), random_sl2z(rng)
        seen.add(maass_case(M, N))
        t, c = maass_table(M, N), w1_closed(M, N)
        a = w_func(iota1(GroupMatrix(order, M)), iota1(GroupMatrix(order, N)))
        case.record(t == c == a, {"M": M, "N": N, "table": t, "closed": c, "analytic": a})
    case.extra["cases_seen"] = sorted([list(x) for x in seen])
    report.results.append(case.result())

    case = _Case("degree1_inverse")
    for i in range(n):
        rng = _rng(seed, S, case.name, i)
        M = random_sl2z(rng)
        if M[1][0] == 0:
            case.skipped += 1
            continue
        Minv = ((M[1][1], -M[0][1]), (-M[1][0], M[0][0]))
        case.record(w1_closed(M, Minv) == 0, M)
    report.results.append(case.result())

    case = _Case("upper_translation")
    for i in range(n):
        rng = _rng(seed, S, case.name, i)
        T = upper_translation(random_hermitian(order, rng))
        M = random_word(all_gens, rng)
        case.record(w_func(T, M) == 0, {"S": _mat(T), "M": _mat(M)})
    report.results.append(case.result())

    for name, lower in (("I_translation", False), ("translation_I", True)):
        case = _Case(name)
        signs = set()
        for i in range(n):
            rng = _rng(seed, S, case.name, i)
            H = random_hermitian(order, rng)
            tr = H.trace().rational()
            signs.add((tr > 0) - (tr < 0))
            if lower:
                got, want = w_func(lower_translation(H), I), (-1 if tr > 0 else 0)
            else:
                got, want = w_func(I, upper_translation(H)), (0 if tr >= 0 else -1)
            fast = w_fast(lower_translation(H), I) if lower else w_fast(I, upper_translation(H))
            case.record(got == want == fast.w, {"S": _mat(H), "got": got, "want": want})
        case.extra["trace_signs"] = sorted(signs)
        report.results.append(case.result())

    case = _Case("swap_rule")
    for i in range(n):
        rng = _rng(seed, S, case.name, i)
        M = random_word(all_gens, rng)
        rule = w_fast(P, M)
        if rule is None or rule.certificate.get("rule") != "swap-left":
            case.skipped += 1
            continue
        left, right = w_func(P, M), w_func(M, P)
        rule_r = w_fast(M, P)
        ok = left == right == rule.w and (rule_r is None or rule_r.w == rule.w)
        case.record(ok, {"M": _mat(M), "w(P,M)": left, "w(M,P)": right, "rule": rule.w})
    report.results.append(case.result())

    case = _Case("parabolic")
    for i in range(n):
        rng = _rng(seed, S, case.name, i)
        A = random_parabolic(order, rng, eps_one=True)
        B = random_parabolic(order, rng, eps_one=rng.random() < 0.5)
        case.record(w_func(A, B) == 0, {"P": _mat(A), "Q": _mat(B)})
    report.results.append(case.result())

    case = _Case("embedded_parabolic")
    for i in range(n):
        rng = _rng(seed, S, case.name, i)
        emb = iota1 if rng.random() < 0.5 else iota2
        M = emb(GroupMatrix(order, random_sl2z(rng)))
        N = random_parabolic(order, rng, eps_one=True)
        case.record(w_func(M, N) == 0, {"M": _mat(M), "N": _mat(N)})
    report.results.append(case.result())

    case = _Case("epsilon_vanishing")
    for i in range(n):
        rng = _rng(seed, S, case.name, i)
        M = random_parabolic(order, rng, eps_one=True)
        Z = _random_point(order, rng, prec)
        val = arg_continue(M, Z, prec).value
        case.record(abs(val) < 1e-20, {"M": _mat(M), "L": float(val)})
    report.results.append(case.result())

    case = _Case("conjugation")
    Pinv = P.inverse()
    for i in range(n):
        rng = _rng(seed, S, case.name, i)
        m = GroupMatrix(order, random_sl2z(rng))
        exact = P @ iota1(m) @ Pinv == iota2(m)
        case.record(exact and w_func(iota2(m), P) == w_func(P, iota1(m)), _mat(m))
    report.results.append(case.result())

    case = _Case("iota_values")
    hist: dict[int, int] = {}
    for i in range(n):
        rng = _rng(seed, S, case.name, i)
        U, V = random_sl2o(order, rng), random_sl2o(order, rng)
        v = w_func(iota(U), iota(V))
        hist[v] = hist.get(v, 0) + 1
        case.record(True)
    case.extra["values"] = {str(k): hist[k] for k in sorted(hist)}
    report.results.append(case.result())

    case = _Case("lower_vanishing")
    for i in range(n):
        rng = _rng(seed, S, case.name, i)
        q = 4
        p = _level_pair(order, q, rng)
        a, nc = p.a.dot, p.c.norm()
        M = _complete_rational(nc, a, q)
        if M is None:
            case.skipped += 1
            continue
        L = ((1, 0), (-q * nc, 1))
        case.record(w1_closed(M, L) == 0, {"M": M, "L": L})
    report.results.append(case.result())

    case = _Case("one_minus_a")
    literal_holds = 0
    for i in range(n):
        rng = _rng(seed, S, case.name, i)
        a = 1 + 4 * rng.randint(-200, 200)
        target = ((2 - a, a - 1), (1 - a, a))
        # the middle factor must be (1 0; 1-a 1); with a-1 the product is the inverse
        lhs = _mul2(_mul2(((1, 1), (0, 1)), ((1, 0), (1 - a, 1))), ((1, -1), (0, 1)))
        literal = _mul2(_mul2(((1, 1), (0, 1)), ((1, 0), (a - 1, 1))), ((1, -1), (0, 1)))
        if literal == target:
            literal_holds += 1
        case.record(lhs == target and _inv2(literal) == target and kronecker(1 - a, a) == 1, a)
    case.extra["literal_identity_holds"] = literal_holds
    report.results.append(case.result())
    return report


def _mul2(X, Y):
    return tuple(tuple(sum(X[i][k] * Y[k][j] for k in range(2)) for j in range(2))
                 for i in range(2))


def _inv2(X):
    (a, b), (c, d) = X
    return ((d, -b), (-c, a))


def _complete_rational(c: int, d: int, q: int):
    """``(a b; c d)`` in SL(2, Z) with ``b = 0 mod q``, or None when gcd(c, d) > 1."""
    if math.gcd(c, d) != 1:
        return None
    # a d - b c = 1 with b = q t: a d = 1 mod q c
    m = abs(q * c)
    a = pow(d, -1, m) if m > 1 else 0
    b = (a * d - 1) // c
    return ((a, b), (c, d))


def _random_point(order: OrderDesc, rng: random.Random, prec: int | None) -> HalfSpacePoint:
    # Z = X + iY with Y = E + small Hermitian perturbation
    x = [[rng.uniform(-2, 2), complex(rng.uniform(-1, 1), rng.uniform(-1, 1))], [0, rng.uniform(-2, 2)]]
    x[1][0] = x[0][1].conjugate()
    y12 = complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3))
    y = [[rng.uniform(0.5, 2), y12], [y12.conjugate(), rng.uniform(0.5, 2)]]
    rows = [[x[i][j] + 1j * y[i][j] for j in range(2)] for i in range(2)]
    return HalfSpacePoint.from_rows(rows, prec or 128)


# Mennicke axioms ---------------------------------------------------------------

def ms_axiom_suite(q: int = 4, order: OrderDesc | None = None, sample_count: int = 500,
                   seed: int = 0, squared: bool = True) -> SuiteReport:
    """MS1, MS2, curly relations and the bridge identity at level ``q`` (and ``q^2``)."""
    if not isinstance(q, int) or q <= 0 or q % 4:
        raise PreconditionError(f"level must be a positive multiple of 4, got {q!r}")
    order = order or make_order(-4)
    report = SuiteReport("ms", seed, sample_count)
    if sample_count <= 0:
        return report
    for level in ((q, q * q) if squared else (q,)):
        report.results.extend(_ms_level(order, level, sample_count, seed))
    return report


def _ms_level(order: OrderDesc, q: int, n: int, seed) -> list[dict]:
    S = f"ms:{order.d}:{q}"
    ms1a, ms1c, generic = _Case(f"q={q}:ms1_move_a"), _Case(f"q={q}:ms1_move_c"), _Case(f"q={q}:ms1_generic_x")
    ms2, curl, emaa, bridge = (_Case(f"q={q}:ms2"), _Case(f"q={q}:curly_relation"),
                               _Case(f"q={q}:one_minus_a"), _Case(f"q={q}:bridge"))
    for i in range(n):
        rng = _rng(seed, S, "pair", i)
        p = _level_pair(order, q, rng)
        a, c = p.a.dot, p.c
        val = mennicke_restricted(p)
        # move a -> a + x c with x c rational: x = k m c-bar / N(c)
        m = rational_part_min(c)
        k = rng.randint(-5, 5)
        x = order(0) if k == 0 else _exact_div(c.conj() * (k * m), c.norm())
        y = order(rng.randint(-5, 5), rng.randint(-5, 5))
        st = ms1_moves(p, x, y)
        ms1a.record(st["move_a"] == "pass", {"a": a, "c": str(c), "x": str(x)})
        ms1c.record(st["move_c"] == "pass", {"a": a, "c": str(c), "y": str(y)})
        xg = order(rng.randint(-5, 5), rng.randint(1, 5))
        sg = ms1_moves(p, xg, order(0))
        if sg["move_a"] == "skip":
            generic.skipped += 1
        else:
            generic.record(sg["move_a"] == "pass", {"a": a, "c": str(c), "x": str(xg)})
        # MS2: second entry with the same a
        while True:
            c2 = order(rng.randint(-12, 12), rng.randint(-12, 12)) * q
            if not c2.is_zero() and ideal_coprime(p.a, c2):
                break
        p2 = MennickePair(p.a, c2, p.level)
        p12 = MennickePair(p.a, c * c2, p.level)
        ms2.record(mennicke_restricted(p12) == val * mennicke_restricted(p2),
                   {"a": a, "c1": str(c), "c2": str(c2)})
        z = rng.randint(-10_000, 10_000) or 1
        curl.record(curly_relation_check(c, z, a, level=q), {"a": a, "c1": str(c), "c2": z})
        emaa.record(curly(1 - a, a) == 1 and curly_relation_check(c, 1 - a, a, level=q), a)
        nc = c.norm()
        bridge.record(val == curly(nc, a) == curly(nc * (1 - a), a), {"a": a, "c": str(c)})
    out = []
    for case in (ms1a, ms1c, generic, ms2, curl, emaa, bridge):
        case.extra["level"] = q
        out.append(case.result())
    return out


def _exact_div(x: QuadInt, n: int) -> QuadInt:
    if x.dot % n or x.ddot % n:
        raise ArithmeticError(f"{x} is not divisible by {n}")
    return QuadInt(x.dot // n, x.ddot // n, x.order)


# the witness -------------------------------------------------------------------

@dataclass
class WitnessReport:
    q: int
    d: int
    c: QuadInt
    p: int
    alpha: int
    x: int
    a: int
    symbol: int
    matrix: GroupMatrix
    verification: dict

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "q": self.q, "d": self.d,
            "c": format_entry(QuadRat(self.c)),
            "c_coords": list(self.c.coords()),
            "p": self.p, "alpha": self.alpha, "x": self.x, "a": self.a,
            "symbol": self.symbol,
            "matrix": self.matrix.to_json(),
            "verification": self.verification,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)


def smallest_nonresidue(p: int) -> int:
    for alpha in range(2, p):
        if legendre_enumerated(alpha, p) == -1:
            return alpha
    raise PreconditionError(f"no nonresidue modulo {p}")


def witness_non_congruence(q: int, order: OrderDesc, limit: int = 10_000) -> WitnessReport:
    """Pair ``(a, q c)`` in the restricted domain with ``[q c / a] = -1``.

    ``p = N(c)`` is the smallest prime norm coprime to ``q d`` (so ``p``
    splits), ``alpha`` the least nonresidue mod ``p`` and ``a = 1 + x q`` the
    least positive solution of ``a = alpha mod p``.
    """
    level = LevelIdeal(q)
    c = split_prime_search(order, coprime_to=q * abs(order.d), limit=limit)
    p = c.norm()
    alpha = smallest_nonresidue(p)
    x = (alpha - 1) * pow(q, -1, p) % p
    a = 1 + x * q
    pair = MennickePair(order(a), c * q, level)
    symbol = mennicke_restricted(pair)
    matrix = complete_pair(pair)
    report = WitnessReport(q, order.d, c, p, alpha, x, a, symbol, matrix, {})
    report.verification = verify_witness(report.to_dict())
    if symbol != -1 or not report.verification["ok"]:
        raise AssertionError(f"witness self-check failed: {report.verification}")
    return report


def verify_witness(data: dict) -> dict:
    """Re-check a serialized witness using only residue lists and trial division."""
    q, d, p, alpha, x, a = (data[k] for k in ("q", "d", "p", "alpha", "x", "a"))
    order = make_order(d)
    c = order(*data["c_coords"])
    qc = c * q
    n_qc = qc.norm()
    checks = {
        "norm_is_p": c.norm() == p,
        "p_prime": p > 1 and all(p % f for f in range(2, math.isqrt(p) + 1)),
        "p_coprime_q": math.gcd(p, q) == 1,
        "a_is_1_plus_xq": a == 1 + x * q,
        "a_mod_p_is_alpha": (a - alpha) % p == 0,
        "alpha_nonresidue": legendre_enumerated(alpha, p) == -1,
    }
    # (N(qc)/a) as a product of Legendre symbols over the prime factors of a
    jac = jacobi_enumerated(n_qc, a)
    transcript = {
        "N(qc)": n_qc,
        "(N(qc)/a)": jac,
        "(p/a)": jacobi_enumerated(p, a),
        "(a/p)": legendre_enumerated(a, p),
        "(alpha/p)": legendre_enumerated(alpha, p),
        "squares_mod_p": sorted({t * t % p for t in range(1, p)}),
    }
    checks["symbol_minus_one"] = jac == -1 == data["symbol"]
    checks["chain"] = transcript["(p/a)"] == transcript["(a/p)"] == transcript["(alpha/p)"] == -1
    rows = [[parse_entry(order, e) for e in r] for r in data["matrix"]]
    M = GroupMatrix(order, rows)
    checks["matrix_det_one"] = M.det().is_one()
    checks["matrix_level"] = M.is_integral() and in_congruence(M, q)
    checks["matrix_column"] = M.rows[0][0] == order(a) and M.rows[1][0] == qc
    return {"ok": all(checks.values()), "checks": checks, "transcript": transcript}
