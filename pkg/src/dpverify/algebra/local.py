"""Local algebra at the origin: jet-space quotients by exact sparse elimination."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .poly import MPoly


class TruncationTooSmall(RuntimeError):
    """The quotient dimension did not stabilize below the truncation cap."""


def monomials_below(nvars: int, n: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree < n, by increasing degree."""
    out = []
    for deg in range(n):
        for combo in combinations_with_replacement(range(nvars), deg):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


class SparseEchelon:
    """Incremental row echelon form over Q with a fixed column priority.

    Columns with higher priority become pivots first, so the non-pivot
    columns (a basis of the quotient) are the low-priority ones.
    """

    def __init__(self, priority=None):
        # mapping or callable giving the priority of a column; default: the column itself
        if priority is None:
            self.key = lambda col: col
        elif callable(priority):
            self.key = priority
        else:
            self.key = priority.__getitem__
        self.rows: dict = {}  # pivot column -> row (pivot coefficient 1)

    def _lead(self, row: dict):
        return max(row, key=self.key)

    def reduce(self, row: dict) -> dict:
        row = {k: Fraction(v) for k, v in row.items() if v}
        while row:
            lead = self._lead(row)
            piv = self.rows.get(lead)
            if piv is None:
                return row
            c = row[lead]
            for k, v in piv.items():
                nv = row.get(k, 0) - c * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return row

    def add(self, row: dict) -> bool:
        row = self.reduce(row)
        if not row:
            return False
        lead = self._lead(row)
        inv = 1 / row[lead]
        self.rows[lead] = {k: v * inv for k, v in row.items()}
        return True

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)

    @property
    def rank(self) -> int:
        return len(self.rows)


def _truncated_terms(f: MPoly, n: int) -> dict:
    return {m: c for m, c in f.terms.items() if sum(m) < n}


def jet_ideal_space(gens: Sequence[MPoly], n: int) -> tuple[SparseEchelon, list[tuple[int, ...]]]:
    """Echelon basis of the image of ``(gens) + m^n`` in polynomials of degree < n."""
    if not gens:
        raise ValueError("need at least one generator")
    nv = len(gens[0].arena)
    mons = monomials_below(nv, n)
    # higher degree first as pivots; ties broken by reverse position
    priority = {m: (sum(m), -i) for i, m in enumerate(mons)}
    ech = SparseEchelon(priority)
    for g in gens:
        low = g.min_degree() if not g.is_zero() else n
        for m in mons:
            if sum(m) + low >= n:
                continue
            shifted = {tuple(a + b for a, b in zip(m, e)): c for e, c in g.terms.items()
                       if sum(e) + sum(m) < n}
            if shifted:
                ech.add(shifted)
    return ech, mons


def jet_quotient(gens: Sequence[MPoly], n: int) -> list[tuple[int, ...]]:
    """Monomial basis of ``k[x]/((gens) + m^n)``."""
    ech, mons = jet_ideal_space(gens, n)
    return [m for m in mons if m not in ech.rows]


def local_length(gens: Sequence[MPoly], start: int = 2, cap: int = 14) -> tuple[int, list[tuple[int, ...]], int]:
    """Length of the local ring ``k[x]_(x)/(gens)`` at the origin.

    Raises the truncation order until two consecutive orders give the same
    quotient dimension; then m^(n-1) lies in the ideal locally (Nakayama).
    Returns (length, monomial basis, order used).
    """
    prev = None
    for n in range(start, cap + 1):
        basis = jet_quotient(gens, n)
        if prev is not None and len(basis) == prev:
            return len(basis), basis, n
        prev = len(basis)
    raise TruncationTooSmall(f"quotient dimension not stable up to order {cap}")


def in_jet_ideal(f: MPoly, gens: Sequence[MPoly], n: int) -> bool:
    """Is f in ``(gens) + m^n`` (computed on jets of degree < n)?"""
    ech, _ = jet_ideal_space(gens, n)
    return ech.contains(_truncated_terms(f, n))


def translate_to_origin(polys: Iterable[MPoly], point: dict) -> list[MPoly]:
    """Substitute v -> v + point[v] so that ``point`` moves to the origin."""
    out = []
    for f in polys:
        images = {v: MPoly.var(f.arena, v) + Fraction(point[v]) for v in f.arena if point.get(v, 0)}
        out.append(f.subs(images) if images else f)
    return out
