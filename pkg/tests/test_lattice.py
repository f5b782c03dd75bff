import random

import pytest
from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

from hermi.lattice import column_echelon, lattice_basis, reduce_mod_lattice, solve_integer


def _rand(rng, m, k, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(k)] for _ in range(m)]


def _matmul(A, B):
    return [[sum(A[i][t] * B[t][j] for t in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


def test_echelon_factorization_is_unimodular():
    rng = random.Random(3)
    for _ in range(200):
        A = _rand(rng, 2, 4)
        H, U, piv = column_echelon(A)
        assert _matmul(A, U) == H
        assert abs(Matrix(U).det()) == 1
        for r, c in piv:
            assert H[r][c] > 0
            assert all(H[r2][c] == 0 for r2 in range(r))


def test_lattice_matches_sympy_hnf():
    # the lattice index (product of pivots) is an invariant of the column span
    rng = random.Random(4)
    for _ in range(100):
        A = _rand(rng, 2, 4)
        if Matrix(A).rank() < 2:
            continue
        basis = lattice_basis(A)
        ours = abs(Matrix(basis).T.det())
        theirs = abs(hermite_normal_form(Matrix(A)).det())
        assert ours == theirs


def test_solve_integer_finds_solutions_or_none():
    rng = random.Random(5)
    for _ in range(200):
        A = _rand(rng, 2, 4)
        t = [rng.randint(-5, 5), rng.randint(-5, 5)]
        x = solve_integer(A, t)
        if x is not None:
            assert [sum(A[i][j] * x[j] for j in range(4)) for i in range(2)] == t
    assert solve_integer([[2, 4], [0, 6]], [1, 0]) is None


def test_reduce_mod_lattice_canonical():
    rows = [[4, 0], [0, 4]]
    assert reduce_mod_lattice([9, -3], rows) == [1, 1]
    assert reduce_mod_lattice([5, 5], rows) == reduce_mod_lattice([1, 9], rows)
    with pytest.raises(ValueError):
        reduce_mod_lattice([1, 1], [[1, 2], [2, 4]])
