"""Integer column-echelon reduction for small integer matrices.

Used to decide ideal membership in the ring of integers and to solve the
linear systems behind pair completion.  Matrices are tiny (2 rows, at most
a handful of columns), so plain Python integers are the right tool.
"""

from __future__ import annotations

from typing import Optional, Sequence


def column_echelon(rows: Sequence[Sequence[int]]):
    """Reduce ``A`` by unimodular column operations.

    Returns ``(H, U, pivots)`` with ``H == A @ U``, ``U`` unimodular and ``H``
    in lower column-echelon form.  ``pivots`` lists ``(row, col)`` for every
    pivot; pivot entries are positive and entries to the left of a pivot are
    reduced into ``[0, pivot)``.
    """
    m = len(rows)
    k = len(rows[0]) if m else 0
    # Work on columns: cols[j] is column j of A, ucols[j] is column j of U.
    cols = [[rows[i][j] for i in range(m)] for j in range(k)]
    ucols = [[int(i == j) for i in range(k)] for j in range(k)]

    def addmul(dst: int, src: int, f: int) -> None:
        if f:
            cd, cs = cols[dst], cols[src]
            for i in range(m):
                cd[i] += f * cs[i]
            ud, us = ucols[dst], ucols[src]
            for i in range(k):
                ud[i] += f * us[i]

    def swap(i: int, j: int) -> None:
        cols[i], cols[j] = cols[j], cols[i]
        ucols[i], ucols[j] = ucols[j], ucols[i]

    pivots = []
    col = 0
    for r in range(m):
        if col >= k:
            break
        while True:
            live = [j for j in range(col, k) if cols[j][r] != 0]
            if not live:
                break
            p = min(live, key=lambda j: abs(cols[j][r]))
            for j in live:
                if j != p:
                    addmul(j, p, -(cols[j][r] // cols[p][r]))
            if all(cols[j][r] == 0 for j in live if j != p):
                swap(col, p)
                break
        if cols[col][r] == 0:
            continue
        if cols[col][r] < 0:
            cols[col] = [-x for x in cols[col]]
            ucols[col] = [-x for x in ucols[col]]
        piv = cols[col][r]
        for j in range(col):
            addmul(j, col, -(cols[j][r] // piv))
        pivots.append((r, col))
        col += 1

    H = [[cols[j][i] for j in range(k)] for i in range(m)]
    U = [[ucols[j][i] for j in range(k)] for i in range(k)]
    return H, U, pivots


def solve_integer(rows: Sequence[Sequence[int]], target: Sequence[int]) -> Optional[list[int]]:
    """Return an integer vector ``x`` with ``A x == target``, or ``None``."""
    m = len(rows)
    k = len(rows[0]) if m else 0
    H, U, pivots = column_echelon(rows)
    y = [0] * k
    for r, c in pivots:
        acc = target[r] - sum(H[r][j] * y[j] for j in range(c))
        if acc % H[r][c]:
            return None
        y[c] = acc // H[r][c]
    for i in range(m):
        if sum(H[i][j] * y[j] for j in range(k)) != target[i]:
            return None
    return [sum(U[i][j] * y[j] for j in range(k)) for i in range(k)]


def lattice_basis(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Column basis (as a list of column vectors) of the lattice spanned by the columns."""
    H, _, pivots = column_echelon(rows)
    return [[H[i][c] for i in range(len(H))] for _, c in pivots]


def reduce_mod_lattice(vec: Sequence[int], rows: Sequence[Sequence[int]]) -> list[int]:
    """Canonical representative of ``vec`` modulo a full-rank lattice in Z^m.

    Each coordinate ends up in ``[0, pivot)`` of the corresponding echelon
    pivot, so two vectors are congruent iff their representatives coincide.
    """
    H, _, pivots = column_echelon(rows)
    if len(pivots) != len(H):
        raise ValueError("lattice is not of full rank")
    v = list(vec)
    for r, c in pivots:
        f = v[r] // H[r][c]
        if f:
            for i in range(len(v)):
                v[i] -= f * H[i][c]
    return v
