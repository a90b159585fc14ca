"""Global vector fields on the plane and their lifts through point blow-ups.

A field on U0 = {x0 != 0} with coordinates (x, y) is written against the
eight-element basis of H^0(P^2, T); it lifts to the blow-up at a point iff
its lift to the chart centred at that point vanishes there.  The drop of
h^0 at each step then gives the change of h^1 through the ledger formula
h^1(S') = h^1(S) + 2 - (h^0(S) - h^0(S')).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import MPoly, cramer_image_test, linear_solve, rref
from .catalog import CatalogEntry, chart_chain, classify_point_type, get_entry

PLANE = ("x", "y")
EXPECTED_INCREMENT = {1: 0, 2: 1, 3: 2}


class LiftError(ArithmeticError):
    """A field expected to be regular did not lift to a polynomial field."""


def p2_basis() -> list[tuple[MPoly, MPoly]]:
    """(1,0), (x,0), (y,0), (0,1), (0,x), (0,y), (x^2,xy), (xy,y^2) on U0."""
    X, Y = MPoly.gens(PLANE)
    one, zero = MPoly.const(PLANE, 1), MPoly.zero(PLANE)
    return [(one, zero), (X, zero), (Y, zero), (zero, one), (zero, X), (zero, Y),
            (X * X, X * Y), (X * Y, Y * Y)]


def field_of(coeffs: Sequence) -> tuple[MPoly, MPoly]:
    """The field sum a_k v_k for a coefficient vector (a_1, ..., a_8)."""
    P = Q = MPoly.zero(PLANE)
    for a, (p, q) in zip(coeffs, p2_basis()):
        if a:
            P = P + p * a
            Q = Q + q * a
    return P, Q


def lift(entry: CatalogEntry, index: int, coeffs: Sequence) -> tuple[MPoly, MPoly]:
    """Components of the field in the chart centred at point ``index``.

    Solves J w = v o pi by Cramer's rule, where J is the Jacobian of the
    chart map; the division must be exact for a field that lifted through
    every earlier blow-up on the way.
    """
    chart = chart_chain(entry, index)
    P, Q = field_of(coeffs)
    v = [chart.pullback(P), chart.pullback(Q)]
    J = chart.jacobian()
    if not cramer_image_test(J, v):
        raise LiftError(f"{entry.id}: field does not lift to the chart of p{index}")
    det = J[0][0] * J[1][1] - J[0][1] * J[1][0]
    w0 = (J[1][1] * v[0] - J[0][1] * v[1]).exact_div(det)
    w1 = (J[0][0] * v[1] - J[1][0] * v[0]).exact_div(det)
    return w0, w1


def _value_at_origin(w: tuple[MPoly, MPoly]) -> list[Fraction]:
    return [c.constant_term() for c in w]


@dataclass
class StepRecord:
    step: int
    point: str
    type: int
    conditions: list  # new rows on (a_1..a_8), reduced against earlier ones
    h0: int
    h1: int

    def to_json(self) -> dict:
        return {"step": self.step, "point": self.point, "type": self.type, "h0": self.h0, "h1": self.h1,
                "conditions": [_row_str(r) for r in self.conditions]}


def _row_str(row) -> str:
    terms = []
    for k, c in enumerate(row):
        if c:
            coef = "" if c == 1 else ("-" if c == -1 else f"{c}*")
            terms.append(f"{coef}a{k + 1}")
    return " + ".join(terms).replace("+ -", "- ") + " = 0"


@dataclass
class TangentLedger:
    entry_id: str
    steps: list = field(default_factory=list)
    basis: list = field(default_factory=list)  # final subspace of coefficient vectors

    @property
    def h0(self) -> list[int]:
        return [8] + [s.h0 for s in self.steps]

    @property
    def h1(self) -> list[int]:
        return [0] + [s.h1 for s in self.steps]

    @property
    def final_h1(self) -> int:
        return self.h1[-1]

    def to_json(self) -> dict:
        return {"id": self.entry_id, "steps": [s.to_json() for s in self.steps], "final_h1": self.final_h1}


def _span_basis(vectors) -> list[list[Fraction]]:
    R, _ = rref(vectors) if vectors else ([], [])
    return [r for r in R if any(r)]


def lift_step(subspace: Sequence[Sequence], entry: CatalogEntry, step: int
              ) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """Fields of ``subspace`` that lift through the blow-up at point ``step``.

    Returns the new subspace basis and the new linear conditions on the
    coefficients, reduced against the conditions that cut out ``subspace``.
    """
    subspace = [list(map(Fraction, w)) for w in subspace]
    values = [_value_at_origin(lift(entry, step, w)) for w in subspace]
    # sum c_j values_j = 0 componentwise
    rows = [[values[j][comp] for j in range(len(subspace))] for comp in range(2)]
    kernel, _ = linear_solve(rows, len(subspace)) if subspace else ([], 0)
    new = _span_basis([[sum(c * w[k] for c, w in zip(vec, subspace)) for k in range(8)] for vec in kernel])
    return new, _new_conditions(subspace, new)


def _annihilator(basis: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    if not basis:
        return [[Fraction(int(i == k)) for k in range(8)] for i in range(8)]
    ann, _ = linear_solve(basis, 8)
    return _span_basis(ann)


def _new_conditions(old, new) -> list[list[Fraction]]:
    """Echelon rows of the new annihilator whose pivots are not old pivots."""
    before = _annihilator(old)
    old_piv = set(rref(before)[1]) if before else set()
    return [r for r in _annihilator(new) if next(k for k, c in enumerate(r) if c) not in old_piv]


def ledger(entry: CatalogEntry | str) -> TangentLedger:
    """h^0 and h^1 of the tangent sheaf after each blow-up of the configuration."""
    if isinstance(entry, str):
        entry = get_entry(entry)
    basis = [[Fraction(int(i == k)) for k in range(8)] for i in range(8)]
    out = TangentLedger(entry.id)
    h0, h1 = 8, 0
    for p in entry.points:
        basis, conds = lift_step(basis, entry, p.index)
        drop = h0 - len(basis)
        h0, h1 = len(basis), h1 + 2 - drop
        out.steps.append(StepRecord(p.index, _point_label(p), classify_point_type(entry, p.index), conds, h0, h1))
    out.basis = basis
    return out


def _point_label(p) -> str:
    if p.parent is None:
        return "[" + ":".join(str(c) for c in p.plane) + "]"
    return f"[{p.direction[0]}:{p.direction[1]}] on E{p.parent}"


@dataclass
class StepCheck:
    step: int
    type: int
    increment: int
    expected: int

    @property
    def passed(self) -> bool:
        return self.increment == self.expected


def verify_tdd(entry: CatalogEntry | str, led: TangentLedger | None = None) -> list[StepCheck]:
    """Compare each h^1 increment with the one predicted by the point type."""
    if isinstance(entry, str):
        entry = get_entry(entry)
    led = led or ledger(entry)
    h1 = led.h1
    return [StepCheck(s.step, s.type, h1[k + 1] - h1[k], EXPECTED_INCREMENT[s.type])
            for k, s in enumerate(led.steps)]


def verify_cdd(entry: CatalogEntry | str, led: TangentLedger | None = None) -> bool:
    """Final h^1 equals the number of (-2)-curves, i.e. the sum of the A-indices."""
    if isinstance(entry, str):
        entry = get_entry(entry)
    led = led or ledger(entry)
    return led.final_h1 == entry.sum_lambda


def lifts_everywhere(entry: CatalogEntry, coeffs: Sequence) -> bool:
    """Does the field lift (and vanish) at every point of the configuration?"""
    try:
        return all(not any(_value_at_origin(lift(entry, p.index, coeffs))) for p in entry.points)
    except LiftError:
        return False
