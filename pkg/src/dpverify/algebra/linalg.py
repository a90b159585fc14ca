"""Exact row reduction over Q."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row-echelon form and the pivot columns."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def linear_solve(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[Fraction]], int]:
    """Kernel basis and rank of a matrix.

    Kernel vectors are indexed by free columns in increasing order and each
    has its first nonzero entry equal to 1.
    """
    rows = [list(r) for r in rows]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(rows[0])
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        lead = next(x for x in v if x)
        basis.append([x / lead for x in v])
    return basis, len(pivots)


def row_space_basis(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    return rref(rows)[0]


def in_row_space(vec: Sequence, rows: Sequence[Sequence]) -> bool:
    if not rows:
        return not any(vec)
    return rank(list(rows) + [list(vec)]) == rank(rows)


def mat_vec(m: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    return [sum((Fraction(a) * b for a, b in zip(row, v)), Fraction(0)) for row in m]
