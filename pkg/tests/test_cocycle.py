import random
from fractions import Fraction

import pytest

from hermi.cocycle import (CocycleMismatch, HalfSpacePoint, act, arg_continue,
                           cocycle_identity_check, conjugate_multiplier, context, j_factor,
                           maass_case, maass_table, multiplier_check, sigma, sigma_from_w, w,
                           w1_closed, w_analytic, w_fast)
from hermi.errors import PreconditionError
from hermi.experiments import random_hermitian, random_parabolic, random_sl2z
from hermi.groups import (GroupMatrix, alternating, congruence_generators, iota1, iota2,
                          lower_translation, random_word, standard_generators, swap_matrix,
                          upper_translation)
from hermi.iquad import make_order
from hermi.symbols import theta_multiplier

o4 = make_order(-4)
I = alternating(o4, 2)
P = swap_matrix(o4)
E4 = GroupMatrix.identity(o4, 4)


def _trace_S(t):
    return GroupMatrix(o4, [[t, 0], [0, 0]])


def test_context_is_cached_per_precision():
    assert context(128) is context(128)
    assert context(128).prec == 128 and context(256).prec == 256


def test_act_fixed_point_and_translation():
    Z = act(I)
    for i in range(2):
        for j in range(2):
            want = 1j if i == j else 0
            assert abs(complex(Z.Z[i][j]) - want) < 1e-30
    S = random_hermitian(o4, random.Random(0))
    Z0 = HalfSpacePoint.iE(2)
    Z1 = act(upper_translation(S), Z0)
    Sn = [[complex(x) for x in r] for r in S.rows]
    for i in range(2):
        for j in range(2):
            assert abs(complex(Z1.Z[i][j]) - (complex(Z0.Z[i][j]) + Sn[i][j])) < 1e-30


def test_action_and_chain_rule():
    rng = random.Random(1)
    gens = standard_generators(2, 4, o4)
    ctx = context(128)
    for _ in range(30):
        M, N = random_word(gens, rng, 4), random_word(gens, rng, 4)
        Z = act(random_word(gens, rng, 3))
        lhs = act(M @ N, Z)
        rhs = act(M, act(N, Z))
        for i in range(2):
            for j in range(2):
                assert abs(lhs.Z[i][j] - rhs.Z[i][j]) < ctx.mpf(2) ** -100
        lhs_j = j_factor(M @ N, Z)
        rhs_j = j_factor(M, act(N, Z)) * j_factor(N, Z)
        assert abs(lhs_j - rhs_j) < ctx.mpf(2) ** -40 * abs(lhs_j)
        act(M, Z).check()


def test_j_examples():
    assert abs(complex(j_factor(I)) + 1) < 1e-30
    assert abs(complex(j_factor(upper_translation(_trace_S(3)))) - 1) < 1e-30


def test_half_space_rejects_bad_points():
    with pytest.raises(PreconditionError):
        HalfSpacePoint.from_rows([[1j, 0], [0, -1j]])
    with pytest.raises(PreconditionError):
        HalfSpacePoint.from_rows([[1j, 2], [-2, 1j]])


def test_arg_continue_examples():
    ctx = context(128)
    iE = HalfSpacePoint.iE(2)
    assert abs(arg_continue(I, iE).value - ctx.pi) < 1e-30
    rng = random.Random(2)
    target = act(random_word(standard_generators(2, 4, o4), rng))
    M = random_parabolic(o4, rng)
    assert abs(arg_continue(M, target).value) < 1e-30
    # refinement does not change the continued value
    N = lower_translation(_trace_S(5)) @ I
    a = arg_continue(N, target)
    b = arg_continue(N, target, refine=2)
    assert b.steps >= a.steps and abs(a.value - b.value) < ctx.mpf(2) ** -40


def test_unit_and_translation_rules():
    rng = random.Random(3)
    gens = standard_generators(2, 4, o4)
    for _ in range(10):
        M = random_word(gens, rng)
        assert w(E4, M, method="analytic").w == 0
        assert w(M, E4, method="analytic").w == 0
        T = upper_translation(random_hermitian(o4, rng))
        assert w(T, M, method="analytic").w == 0


@pytest.mark.parametrize("t,want", [(-2, -1), (2, 0), (0, 0)])
def test_I_translation(t, want):
    T = upper_translation(_trace_S(t))
    v = w(I, T, verify=True)
    assert v.w == want and v.method == "special-lemma"


@pytest.mark.parametrize("t,want", [(2, -1), (-2, 0), (0, 0)])
def test_translation_I(t, want):
    L = lower_translation(_trace_S(t))
    assert w(L, I, verify=True).w == want


def test_swap_rule_against_continuation():
    rng = random.Random(4)
    gens = standard_generators(2, 4, o4)
    for _ in range(20):
        M = random_word(gens, rng)
        assert w(P, M, verify=True).w == w(M, P, method="analytic").w
    assert w(P, I, verify=True).w == w(P, I, method="analytic").w


def test_verify_flag_detects_disagreement(monkeypatch):
    import hermi.cocycle as cc
    real = cc.w_fast

    def broken(M, N):
        v = real(M, N)
        return None if v is None else cc.CocycleValue(v.w + 1, v.method, v.certificate)

    monkeypatch.setattr(cc, "w_fast", broken)
    with pytest.raises(CocycleMismatch):
        w(I, upper_translation(_trace_S(-2)), verify=True)


def test_certificate_and_method_tags():
    a = w_analytic(I, I)
    assert a.method == "analytic-continuation"
    assert {"steps", "min_margin", "prec", "residual"} <= set(a.certificate)
    assert a.certificate["residual"] < 1e-6
    assert w_fast(I, P).method == "special-lemma"
    with pytest.raises(PreconditionError):
        w(I, I, method="bogus")
    with pytest.raises(PreconditionError):
        w(I, GroupMatrix.identity(o4, 2))


def test_higher_precision_agrees():
    rng = random.Random(5)
    gens = congruence_generators(2, 4, o4)
    for _ in range(5):
        M, N = random_word(gens, rng), random_word(gens, rng)
        assert w_analytic(M, N, 128).w == w_analytic(M, N, 256).w


def test_w1_examples():
    rng = random.Random(6)
    for _ in range(50):
        M = random_sl2z(rng)
        x = rng.randint(-9, 9)
        T = ((1, x), (0, 1))
        assert w1_closed(T, M) == w1_closed(M, T) == 0
        if M[1][0] != 0:
            Minv = ((M[1][1], -M[0][1]), (-M[1][0], M[0][0]))
            assert w1_closed(M, Minv) == 0
    J = ((0, -1), (1, 0))
    assert w1_closed(J, J) == 0 == maass_table(J, J)
    assert maass_case(J, J) == (2, False)


def test_maass_table_rows():
    # first row with all signs positive; last row with a > 0, m2 > 0
    assert maass_table(((1, 0), (1, 1)), ((1, 0), (1, 1))) == 0
    assert maass_case(((1, 0), (0, 1)), ((1, 0), (0, 1))) == (5, False)
    assert maass_table(((1, 0), (0, 1)), ((1, 0), (0, 1))) == 0
    rng = random.Random(7)
    for _ in range(300):
        M, S = random_sl2z(rng), random_sl2z(rng)
        assert maass_table(M, S) == w1_closed(M, S)


def test_degree_one_analytic_on_iota_images():
    rng = random.Random(8)
    for _ in range(30):
        M, S = random_sl2z(rng), random_sl2z(rng)
        k = w1_closed(M, S)
        for emb in (iota1, iota2):
            assert w(emb(GroupMatrix(o4, M)), emb(GroupMatrix(o4, S)), method="analytic").w == k


def test_identity_examples():
    rng = random.Random(9)
    gens = congruence_generators(2, 4, o4)
    assert cocycle_identity_check(I, P, I, method="analytic")
    for _ in range(10):
        M, N = random_word(gens, rng), random_word(gens, rng)
        assert cocycle_identity_check(M, E4, N, method="analytic")
        assert cocycle_identity_check(M, N, random_word(gens, rng), method="analytic")


def test_sigma():
    assert sigma_from_w(-1, Fraction(1, 2)) == -1
    assert sigma_from_w(5, 3) == 1
    assert sigma_from_w(1, Fraction(1, 4)) == 1j
    assert abs(abs(sigma_from_w(1, Fraction(1, 3))) - 1) < 1e-15
    assert sigma(I, upper_translation(_trace_S(-2)), Fraction(1, 2)) == -1


def test_multiplier_check_trivial_and_violation():
    T = upper_translation(_trace_S(-2))
    v = {I: 1, T: 1, I @ T: 1}
    assert multiplier_check(v, 1, [(I, T)]) == []
    assert len(multiplier_check(v, Fraction(1, 2), [(I, T)])) == 1
    with pytest.raises(KeyError):
        multiplier_check({I: 1}, 1, [(I, T)])


def test_theta_table_is_a_multiplier_system():
    rng = random.Random(10)
    gens = standard_generators(1, 4, o4)
    table = {}
    pairs = []
    z = 0.1 + 1.3j

    def value(M):
        if M not in table:
            (a, b), (c, d) = [[x.rational() for x in r] for r in M.rows]
            table[M] = 1 if c == 0 else complex(theta_multiplier(M, z, check=False))
        return table[M]

    while len(pairs) < 15:
        M, N = random_word(gens, rng, 2), random_word(gens, rng, 2)
        try:
            for X in (M, N, M @ N):
                value(X)
        except PreconditionError:
            continue
        pairs.append((M, N))
    assert multiplier_check(table, Fraction(1, 2), pairs, tol=1e-8) == []


def test_conjugate_multiplier():
    rng = random.Random(11)
    for _ in range(10):
        m = GroupMatrix(o4, random_sl2z(rng))
        M1, M2 = iota1(m), iota2(m)
        v = {M2: 1}
        assert conjugate_multiplier(v, P, M1, Fraction(1, 2), w_func=lambda A, B: w(A, B).w) == 1
        assert conjugate_multiplier({M1: 0.5}, E4, M1, Fraction(1, 2)) == 0.5
        with pytest.raises(KeyError):
            conjugate_multiplier({}, P, M1, 1)
