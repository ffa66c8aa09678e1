"""Exact rank and inertia over the rationals.

Small dense routines on ``fractions.Fraction`` entries, used so that
integer worked examples reproduce exactly instead of through an eigenvalue
tolerance.  Sizes here are tiny (matrices of order n+1 for quotient
graphs), so cubic elimination is plenty.
"""

from __future__ import annotations

from fractions import Fraction


def _to_fractions(rows):
    return [[Fraction(x) for x in row] for row in rows]


def rational_rank(rows) -> int:
    """Rank of a rectangular matrix by Gaussian elimination."""
    a = _to_fractions(rows)
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, nrows) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[row], a[pivot] = a[pivot], a[row]
        inv = a[row][col]
        for r in range(row + 1, nrows):
            if a[r][col] != 0:
                factor = a[r][col] / inv
                for c in range(col, ncols):
                    a[r][c] -= factor * a[row][c]
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank


def rational_inertia(rows) -> tuple:
    """Inertia (n_plus, n_minus, n_zero) of a symmetric rational matrix.

    Symmetric congruence elimination: a nonzero diagonal pivot contributes
    its sign; when the whole diagonal is zero but some off-diagonal entry
    a_ij is not, the congruence row_i += row_j / col_i += col_j puts
    2*a_ij on the diagonal, after which elimination proceeds.  Sylvester's
    law makes the counts invariant under these moves.
    """
    a = _to_fractions(rows)
    n = len(a)
    for row in a:
        if len(row) != n:
            raise ValueError("matrix must be square")
    for i in range(n):
        for j in range(i + 1, n):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix must be symmetric")

    active = list(range(n))
    n_plus = n_minus = 0
    while active:
        pivot = next((i for i in active if a[i][i] != 0), None)
        if pivot is None:
            pair = next(
                (
                    (i, j)
                    for i in active
                    for j in active
                    if i < j and a[i][j] != 0
                ),
                None,
            )
            if pair is None:
                break  # remaining block is zero
            i, j = pair
            for c in range(n):
                a[i][c] += a[j][c]
            for r in range(n):
                a[r][i] += a[r][j]
            continue
        d = a[pivot][pivot]
        if d > 0:
            n_plus += 1
        else:
            n_minus += 1
        active.remove(pivot)
        factors = {r: a[r][pivot] / d for r in active if a[r][pivot] != 0}
        for r, f in factors.items():
            for c in range(n):
                a[r][c] -= f * a[pivot][c]
        for r, f in factors.items():
            for c in range(n):
                a[c][r] -= f * a[c][pivot]
    return n_plus, n_minus, n - n_plus - n_minus
