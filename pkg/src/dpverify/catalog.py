"""The 22 configurations of at most four almost-general points on P^2.

Each entry fixes explicit representative coordinates: plane points as
homogeneous triples, infinitely near points as a tangent direction ``[u:v]``
at their parent, written in that parent's chart coordinates ordered as
(exceptional coordinate, other coordinate).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .algebra import MPoly, NotDivisible


class AlmostGeneralPositionError(ValueError):
    """A point lies on a (-2)-curve, or the configuration is otherwise degenerate."""


class UnknownEntry(KeyError):
    pass


@dataclass(frozen=True)
class BasePoint:
    index: int
    parent: int | None = None
    plane: tuple[int, int, int] | None = None
    direction: tuple[int, int] | None = None

    def __post_init__(self):
        if (self.parent is None) == (self.plane is None):
            raise ValueError("a base point is either a plane point or has a parent")
        if self.parent is not None:
            if self.direction is None or self.direction == (0, 0):
                raise ValueError("infinitely near point needs a nonzero direction")
            if self.parent >= self.index:
                raise ValueError("parent must precede the point")

    @property
    def infinitely_near(self) -> bool:
        return self.parent is not None

    def to_json(self) -> dict:
        if self.plane is not None:
            return {"index": self.index, "plane": list(self.plane)}
        return {"index": self.index, "parent": self.parent, "direction": list(self.direction)}


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    points: tuple[BasePoint, ...]
    collinear_sets: tuple[tuple[int, ...], ...] = ()
    expected_singularities: tuple[int, ...] = ()

    @property
    def degree(self) -> int:
        return 9 - len(self.points)

    @property
    def sum_lambda(self) -> int:
        return sum(self.expected_singularities)

    def point(self, i: int) -> BasePoint:
        return self.points[i - 1]

    def ancestors(self, i: int) -> list[int]:
        """Indices of the strict ancestors of point ``i``, nearest first."""
        out = []
        p = self.point(i).parent
        while p is not None:
            out.append(p)
            p = self.point(p).parent
        return out

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "points": [p.to_json() for p in self.points],
            "collinear_sets": [list(s) for s in self.collinear_sets],
            "degree": self.degree,
            "expected_singularities": list(self.expected_singularities),
        }


def _plane(i, x0, x1, x2):
    return BasePoint(i, plane=(x0, x1, x2))


def _near(i, parent, u, v):
    return BasePoint(i, parent=parent, direction=(u, v))


def _build() -> tuple[CatalogEntry, ...]:
    A = (1, 0, 0)
    B = (1, 0, 1)
    C = (1, 1, 0)
    Cm = (1, 0, -1)
    D = (1, 1, -1)
    e = CatalogEntry
    return (
        e("P2", ()),
        e("S1", (_plane(1, *A),)),
        e("S2", (_plane(1, *A), _plane(2, *B))),
        e("S7", (_plane(1, *A), _near(2, 1, 1, 0)), (), (1,)),
        e("S3", (_plane(1, *A), _plane(2, *B), _plane(3, *C))),
        e("S4", (_plane(1, *A), _plane(2, *B), _plane(3, *Cm)), ((1, 2, 3),), (1,)),
        e("S5", (_plane(1, *A), _plane(2, *B), _near(3, 1, 1, 0)), (), (1,)),
        e("S6", (_plane(1, *A), _plane(2, *B), _near(3, 1, 0, 1)), ((1, 2, 3),), (1, 1)),
        e("S8", (_plane(1, *A), _near(2, 1, 1, 0), _near(3, 2, 1, 1)), (), (2,)),
        e("S9", (_plane(1, *A), _near(2, 1, 1, 0), _near(3, 2, 1, 0)), ((1, 2, 3),), (1, 2)),
        e("S3'", (_plane(1, *A), _plane(2, *B), _plane(3, *C), _plane(4, *D))),
        e("S4'", (_plane(1, *A), _plane(2, *B), _plane(3, *Cm), _plane(4, *C)), ((1, 2, 3),), (1,)),
        # printed p4=[1:0] is collinear with p1, p3; see module docs
        e("S3''", (_plane(1, *A), _plane(2, *B), _plane(3, *C), _near(4, 1, 1, 1)), (), (1,)),
        e("S3'''", (_plane(1, *A), _plane(2, *B), _plane(3, *C), _near(4, 1, 0, 1)), ((1, 2, 4),), (1, 1)),
        e("S4''", (_plane(1, *A), _plane(2, *B), _plane(3, *Cm), _near(4, 1, 1, 0)), ((1, 2, 3),), (2,)),
        e("S5'", (_plane(1, *A), _plane(2, *B), _near(3, 1, 1, 0), _near(4, 2, 1, 0)), (), (1, 1)),
        e("S5''", (_plane(1, *A), _plane(2, *B), _near(3, 1, 1, 0), _near(4, 3, 1, 1)), (), (2,)),
        e("S5'''", (_plane(1, *A), _plane(2, *B), _near(3, 1, 1, 0), _near(4, 3, 1, 0)), ((1, 3, 4),), (1, 2)),
        e("S6'", (_plane(1, *A), _plane(2, *B), _near(3, 1, 0, 1), _near(4, 2, 1, 0)), ((1, 2, 3),), (1, 2)),
        e("S6''", (_plane(1, *A), _plane(2, *B), _near(3, 1, 0, 1), _near(4, 3, 1, 1)), ((1, 2, 3),), (3,)),
        e("S8'", (_plane(1, *A), _near(2, 1, 1, 0), _near(3, 2, 1, 1), _near(4, 3, 1, 0)), (), (3,)),
        # p3 as in S9 (collinear); p4 off the line and off the (-2)-curve E2
        e("S9'", (_plane(1, *A), _near(2, 1, 1, 0), _near(3, 2, 1, 0), _near(4, 3, 1, 1)), ((1, 2, 3),), (4,)),
    )


_CATALOG = _build()
_BY_ID = {e.id: e for e in _CATALOG}


def catalog() -> list[CatalogEntry]:
    return list(_CATALOG)


def entry_ids() -> list[str]:
    return [e.id for e in _CATALOG]


def get_entry(entry_id: str) -> CatalogEntry:
    try:
        return _BY_ID[entry_id]
    except KeyError:
        raise UnknownEntry(f"unknown entry {entry_id!r}; valid ids: {', '.join(entry_ids())}") from None


def expected_singularities(entry: CatalogEntry | str) -> tuple[int, ...]:
    """The A_lambda multiset (as sorted lambdas) of the contracted surface."""
    if isinstance(entry, str):
        entry = get_entry(entry)
    return tuple(sorted(entry.expected_singularities))


def catalog_json() -> str:
    return json.dumps([e.to_json() for e in _CATALOG], indent=2)


def catalog_hash() -> str:
    canonical = json.dumps([e.to_json() for e in _CATALOG], sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


# Picard lattice ----------------------------------------------------------------

@dataclass(frozen=True)
class CurveClass:
    """The class h*H - sum e_i*E_i (E_i total transforms)."""

    h: int
    e: tuple[int, ...]
    name: str = field(default="", compare=False)

    def dot(self, other: CurveClass) -> int:
        n = max(len(self.e), len(other.e))
        a = self.e + (0,) * (n - len(self.e))
        b = other.e + (0,) * (n - len(other.e))
        return self.h * other.h - sum(x * y for x, y in zip(a, b))

    @property
    def self_intersection(self) -> int:
        return self.dot(self)

    def canonical_degree(self) -> int:
        """K.C for K = -3H + sum E_i."""
        return -3 * self.h + sum(self.e)

    def __str__(self) -> str:
        return self.name or f"({self.h}; {', '.join(map(str, self.e))})"


def canonical_class(n: int) -> CurveClass:
    return CurveClass(-3, (-1,) * n, "K")


def _exceptional_component(entry: CatalogEntry, i: int, k: int) -> CurveClass:
    e = [0] * k
    e[i - 1] = -1
    children = [p.index for p in entry.points[:k] if p.parent == i]
    for j in children:
        e[j - 1] = 1
    name = f"E{i}" if not children else f"E{i}^"
    return CurveClass(0, tuple(e), name)


def lines(entry: CatalogEntry, k: int | None = None) -> list[tuple[int, ...]]:
    """Point sets of the lines through >= 2 of the first ``k`` points."""
    k = len(entry.points) if k is None else k
    sets: list[tuple[int, ...]] = []
    declared = [tuple(sorted(s)) for s in entry.collinear_sets]
    for s in declared:
        inside = tuple(i for i in s if i <= k)
        if len(inside) >= 2 and inside not in sets:
            sets.append(inside)
    for i, j in combinations(range(1, k + 1), 2):
        pi, pj = entry.point(i), entry.point(j)
        joinable = (not pi.infinitely_near and not pj.infinitely_near) or (
            pj.parent == i and not pi.infinitely_near)
        if not joinable:
            continue
        if any(i in s and j in s for s in declared):
            continue
        sets.append((i, j))
    return sets


def negative_curves(entry: CatalogEntry, prefix_length: int | None = None) -> list[tuple[CurveClass, int]]:
    """Irreducible negative curves on the blow-up of the first points."""
    k = len(entry.points) if prefix_length is None else prefix_length
    if not 0 <= k <= len(entry.points):
        raise ValueError(f"prefix {k} out of range for {entry.id}")
    out = []
    for i in range(1, k + 1):
        c = _exceptional_component(entry, i, k)
        out.append((c, c.self_intersection))
    for pts in lines(entry, k):
        e = [0] * k
        for i in pts:
            e[i - 1] = 1
        c = CurveClass(1, tuple(e), "L" + "".join(map(str, pts)))
        out.append((c, c.self_intersection))
    return [(c, s) for c, s in out if s < 0]


def minus_two_curves(entry: CatalogEntry) -> list[CurveClass]:
    return [c for c, s in negative_curves(entry) if s == -2]


def minus_two_chains(entry: CatalogEntry) -> list[list[CurveClass]]:
    """Connected components of the (-2)-curve configuration."""
    curves = minus_two_curves(entry)
    comps: list[list[CurveClass]] = []
    seen: set[int] = set()
    for start in range(len(curves)):
        if start in seen:
            continue
        stack = [start]
        comp = []
        seen.add(start)
        while stack:
            a = stack.pop()
            comp.append(curves[a])
            for b in range(len(curves)):
                if b not in seen and curves[a].dot(curves[b]) > 0:
                    seen.add(b)
                    stack.append(b)
        comps.append(comp)
    return comps


def exceptional_through(entry: CatalogEntry, step: int) -> list[int]:
    """Indices j whose strict exceptional curve contains point ``step``.

    In the chart centred at the point, the strict transform of E_j is the
    total transform of E_j divided by those of its children on the chain.
    The parent always qualifies; an older ancestor does when the point sits
    where its curve meets E_parent.
    """
    p = entry.point(step)
    if p.parent is None:
        return []
    chart = chart_chain(entry, step)
    out = []
    for j in sorted(chart.exceptional):
        strict = chart.exceptional[j]
        for k, eq in chart.exceptional.items():
            if entry.point(k).parent == j:
                strict = strict.exact_div(eq)
        if strict.constant_term() == 0:
            out.append(j)
    return out


def classify_point_type(entry: CatalogEntry, step: int) -> int:
    """Point type (1, 2 or 3) of point ``step`` on the blow-up of its predecessors.

    Incidence: the point lies on the strict exceptional curves found by
    exceptional_through and on the strict transform of every line whose
    declared point set contains it.  Raises if that puts it on a (-2)-curve.
    """
    if not 1 <= step <= len(entry.points):
        raise ValueError(f"step {step} out of range for {entry.id}")
    k = step - 1
    count = 0
    for j in exceptional_through(entry, step):
        comp = _exceptional_component(entry, j, k)
        if comp.self_intersection != -1:
            raise AlmostGeneralPositionError(f"{entry.id}: p{step} lies on {comp} with self-intersection "
                                             f"{comp.self_intersection}")
        count += 1
    for s in entry.collinear_sets:
        if step in s:
            prior = [i for i in s if i < step]
            if len(prior) < 2:
                continue
            self_int = 1 - len(prior)
            if self_int != -1:
                raise AlmostGeneralPositionError(f"{entry.id}: p{step} on a line with self-intersection {self_int}")
            count += 1
    if count > 2:
        raise AlmostGeneralPositionError(f"{entry.id}: p{step} lies on {count} (-1)-curves")
    return count + 1


# Charts --------------------------------------------------------------------------

_NEW_NAMES_X = ["s", "u", "w", "z"]
_NEW_NAMES_Y = ["t", "v", "r", "q"]


@dataclass(frozen=True)
class ChartChain:
    """Affine chart of an intermediate blow-up with a base point at the origin.

    ``x`` and ``y`` express the affine coordinates of U0 = {x0 != 0} through
    the chart variables ``vars`` = (exceptional, other) of the last blow-up
    (or translated plane coordinates for a plane point).  ``exceptional`` maps
    each ancestor index j to the local equation of the total transform of E_j.
    """

    vars: tuple[str, str]
    x: MPoly
    y: MPoly
    exceptional: dict
    depth: int = 0

    def pullback(self, f_xy: MPoly) -> MPoly:
        """Pull back a polynomial in the affine coordinates (x, y)."""
        return f_xy.subs({"x": self.x, "y": self.y}, self.vars)

    def pullback_cubic(self, f: MPoly) -> MPoly:
        """Pull back a homogeneous form in (x0, x1, x2) via x0 = 1."""
        one = MPoly.const(self.vars, 1)
        return f.subs({"x0": one, "x1": self.x, "x2": self.y}, self.vars)

    def jacobian(self) -> list[list[MPoly]]:
        u, v = self.vars
        return [[self.x.diff(u), self.x.diff(v)], [self.y.diff(u), self.y.diff(v)]]

    def blow_up(self, direction: tuple[int, int], parent: int) -> ChartChain:
        """Chart of the blow-up of the origin containing ``direction``."""
        a, b = self.vars
        du, dv = direction
        level = self.depth
        if du != 0:
            new = _NEW_NAMES_X[level] if level < len(_NEW_NAMES_X) else f"g{level}"
            nv = (a, new)
            c = Fraction(dv, du)
            A = MPoly.var(nv, a)
            G = MPoly.var(nv, new)
            images = {a: A, b: A * (G + c)}
        else:
            new = _NEW_NAMES_Y[level] if level < len(_NEW_NAMES_Y) else f"h{level}"
            nv = (b, new)
            B = MPoly.var(nv, b)
            D = MPoly.var(nv, new)
            images = {a: B * D, b: B}
        sub = lambda p: p.subs(images, nv)  # noqa: E731
        exc = {j: sub(p) for j, p in self.exceptional.items()}
        exc[parent] = MPoly.var(nv, nv[0])
        return ChartChain(nv, sub(self.x), sub(self.y), exc, level + 1)


def plane_chart(point: tuple[int, int, int]) -> ChartChain:
    x0, x1, x2 = point
    if x0 == 0:
        raise ValueError("plane points must lie in the chart x0 != 0")
    nv = ("x", "y")
    X, Y = MPoly.gens(nv)
    return ChartChain(nv, X + Fraction(x1, x0), Y + Fraction(x2, x0), {}, 0)


def chart_chain(entry: CatalogEntry, point_index: int) -> ChartChain:
    """Chart on the blow-up of points < ``point_index`` centred at that point."""
    p = entry.point(point_index)
    if p.parent is None:
        return plane_chart(p.plane)
    parent_chart = chart_chain(entry, p.parent)
    return parent_chart.blow_up(p.direction, p.parent)


def exceptional_chart(entry: CatalogEntry, i: int, direction: tuple[int, int] = (1, 0)) -> ChartChain:
    """A chart of the blow-up at point ``i`` meeting E_i along ``direction``."""
    return chart_chain(entry, i).blow_up(direction, i)


def line_through(entry: CatalogEntry, pts: Sequence[int]) -> MPoly:
    """Linear form in (x0, x1, x2) of the line through the given points."""
    arena = ("x0", "x1", "x2")
    plane = [entry.point(i) for i in pts if not entry.point(i).infinitely_near]
    if len(plane) >= 2:
        p, q = plane[0].plane, plane[1].plane
        coeffs = (p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0])
    else:
        base = plane[0]
        child = next(entry.point(i) for i in pts if entry.point(i).parent == base.index)
        du, dv = child.direction
        x0, x1, x2 = base.plane
        # affine line through (x1/x0, x2/x0) with direction (du, dv)
        coeffs = (Fraction(du * x2 - dv * x1, x0), Fraction(dv), Fraction(-du))
    return sum((MPoly.var(arena, v) * c for v, c in zip(arena, coeffs)), MPoly.zero(arena))


def strict_transform(chart: ChartChain, g: MPoly) -> MPoly:
    """Remove every exceptional coordinate factor from a pulled-back polynomial."""
    exc_vars = [v for v in chart.vars
                if any(eq.degree_in(v) > 0 for eq in chart.exceptional.values())]
    for v in exc_vars:
        X = MPoly.var(chart.vars, v)
        while not g.is_zero():
            try:
                g = g.exact_div(X)
            except NotDivisible:
                break
    return g


def on_strict_transform(entry: CatalogEntry, curve: MPoly, step: int) -> bool:
    """Geometric check: does point ``step`` lie on the strict transform of a plane curve?"""
    chart = chart_chain(entry, step)
    g = strict_transform(chart, chart.pullback_cubic(curve))
    return not g.is_zero() and g.constant_term() == 0


def geometric_incidences(entry: CatalogEntry) -> dict[tuple[int, ...], list[int]]:
    """For every line, the points actually on its strict transform (chart computation)."""
    out = {}
    for pts in lines(entry):
        L = line_through(entry, pts)
        out[pts] = [i for i in range(1, len(entry.points) + 1) if on_strict_transform(entry, L, i)]
    return out
