"""Monomial orders as nonnegative weight matrices.

Every supported order is represented by a square, invertible, nonnegative
integer matrix ``W``: ``m1 < m2`` iff ``W m1 < W m2`` lexicographically.
Because the map ``m -> W m`` is linear, comparison keys add under monomial
multiplication, which the Groebner engine exploits by packing the key
vector into one Python integer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

KEY_BITS = 24


def _grevlex_rows(n: int, offset: int, total: int) -> list[tuple[int, ...]]:
    # row i has ones on the first n - i variables of the block
    rows = []
    for i in range(n):
        row = [0] * total
        for j in range(n - i):
            row[offset + j] = 1
        rows.append(tuple(row))
    return rows


@dataclass(frozen=True)
class MonomialOrder:
    """A total, multiplicative well-order on monomials of ``nvars`` variables.

    ``kind`` is ``"lex"``, ``"grevlex"`` or ``"block"``; a block order compares
    the first ``block`` variables by grevlex and breaks ties by grevlex on the
    rest, so it eliminates the front block.
    """

    kind: str
    nvars: int
    block: int = 0
    matrix: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        n = self.nvars
        if self.kind == "lex":
            rows = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        elif self.kind == "grevlex":
            rows = _grevlex_rows(n, 0, n)
        elif self.kind == "block":
            if not 0 < self.block < n:
                raise ValueError(f"block size {self.block} invalid for {n} variables")
            rows = _grevlex_rows(self.block, 0, n) + _grevlex_rows(n - self.block, self.block, n)
        else:
            raise ValueError(f"unknown order kind {self.kind!r}")
        object.__setattr__(self, "matrix", tuple(rows))

    @classmethod
    def lex(cls, n: int) -> MonomialOrder:
        return cls("lex", n)

    @classmethod
    def grevlex(cls, n: int) -> MonomialOrder:
        return cls("grevlex", n)

    @classmethod
    def elimination(cls, n: int, front: int) -> MonomialOrder:
        return cls("block", n, front)

    def key(self, m: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(w * e for w, e in zip(row, m)) for row in self.matrix)

    def packed_key(self, m: Sequence[int]) -> int:
        k = 0
        for row in self.matrix:
            k = (k << KEY_BITS) | sum(w * e for w, e in zip(row, m))
        return k

    def compare(self, m1: Sequence[int], m2: Sequence[int]) -> int:
        k1, k2 = self.key(m1), self.key(m2)
        return (k1 > k2) - (k1 < k2)

    def leading(self, monomials):
        return max(monomials, key=self.key)

    def describe(self) -> str:
        if self.kind == "block":
            return f"block({self.block})"
        return self.kind
