"""A one-parameter family of degree-7 del Pezzo surfaces in P^7 x A^1.

The base curve C_t = {x1^2 - t(x1 + x0) = 0, x2 = 0} is two points of the
line x2 = 0 for t(t + 4) != 0 and a double point otherwise; the eight cubics
below span the cubics through C_t, and their image closure is the family.
"""

from __future__ import annotations

import random
import time
from itertools import combinations
from math import comb
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .algebra import HomogIdeal, MPoly, eliminate
from .catalog import BasePoint, CatalogEntry
from .embed import (AnticanonicalMap, ImageInvariants, _combine, _det_mod, _integral, anticanonical_map,
                    image_invariants, implicitize, predicted_singular_points, singular_locus_complete)
from .singular import SingularityReport, analyze_point

PARAM = "t"
SOURCE = ("x0", "x1", "x2")
TARGET = tuple("abcdefgh")
MAX_MINORS = 400
CUBICS = (
    "x1^3 - t*x0^2*x1 - t^2*x0^3 - t^2*x0^2*x1",
    "x2^3",
    "x0^2*x2",
    "x0*x1^2 - t*x0^3 - t*x0^2*x1",
    "x0*x2^2",
    "x1^2*x2",
    "x1*x2^2",
    "x0*x1*x2",
)
# reference generators of the family ideal, checked against the elimination
REFERENCE_GENERATORS = (
    "g*e - b*h", "-h*f + g*d + t*h^2 + t*c*h", "-h*e + g*c", "f^2 - g*a - t^2*h^2 - t*h^2 - t^2*c*h",
    "e*f - h*g", "f*d - a*h + t*h*d", "f*c - h^2", "-g^2 + b*f", "d*e - h^2 + t*c^2 + t*c*h",
    "e*a - h*f + t^2*c*h + t^2*c^2 + t*c*h", "b*d - h*g + t*e*h + t*c*e", "-e^2 + c*b",
    "c*a - d*h - t*c*d", "b*a - f*g + t^2*e*h + t^2*c*e + t*c*g",
)


@dataclass(frozen=True)
class FamilyMap:
    components: tuple[MPoly, ...]  # cubics in (x0, x1, x2, t)

    def specialize(self, t0) -> list[MPoly]:
        return [f.subs({PARAM: Fraction(t0)}, SOURCE) for f in self.components]


def family_map() -> FamilyMap:
    arena = SOURCE + (PARAM,)
    return FamilyMap(tuple(MPoly.parse(c, arena) for c in CUBICS))


@lru_cache(maxsize=1)
def family_ideal() -> HomogIdeal:
    """Image closure of the family map, in the arena (a, ..., h, t)."""
    arena = SOURCE + TARGET + (PARAM,)
    gens = [MPoly.var(arena, v) - f.to_arena(arena) for v, f in zip(TARGET, family_map().components)]
    weights = {**{v: 3 for v in TARGET}, PARAM: 1}
    return eliminate(HomogIdeal(gens, arena), SOURCE, weights=weights)


def reference_ideal() -> HomogIdeal:
    arena = TARGET + (PARAM,)
    return HomogIdeal([MPoly.parse(g, arena) for g in REFERENCE_GENERATORS], arena)


def compare_with_reference() -> tuple[bool, bool]:
    """(reference inside computed, computed inside reference) by normal forms."""
    computed, ref = family_ideal(), reference_ideal()
    return computed.contains_ideal(ref), ref.contains_ideal(computed)


def parametrization_vanishes() -> bool:
    """Every generator vanishes after substituting the eight cubics."""
    fm = family_map()
    arena = SOURCE + (PARAM,)
    images = dict(zip(TARGET, fm.components))
    return all(g.subs(images, arena).is_zero() for g in family_ideal().generators)


def fiber_ideal(t0) -> HomogIdeal:
    return family_ideal().specialize({PARAM: Fraction(t0)})


def double_root(t0) -> Fraction | None:
    """The double root of u^2 = t0 (u + 1), if the base curve degenerates."""
    t0 = Fraction(t0)
    if t0 * t0 + 4 * t0 == 0:
        return t0 / 2
    return None


def degenerate_configuration(t0) -> CatalogEntry | None:
    """Two infinitely near points along x2 = 0 when C_t0 is a double point."""
    u0 = double_root(t0)
    if u0 is None:
        return None
    pts = (BasePoint(1, plane=(1, u0, 0)), BasePoint(2, parent=1, direction=(1, 0)))
    return CatalogEntry(f"fiber(t={t0})", pts, (), (1,))


def fiber_map(t0) -> AnticanonicalMap:
    cubics = family_map().specialize(t0)
    entry = degenerate_configuration(t0)
    if entry is None:
        return AnticanonicalMap(cubics, entry_id=f"fiber(t={t0})")
    return anticanonical_map(entry, basis_choice=cubics)


@dataclass
class FiberReport:
    t: Fraction
    status: str  # "smooth" | "singular" | "undetermined"
    invariants: ImageInvariants
    singularities: list = field(default_factory=list)
    specialization_ok: bool = True
    locus_complete: bool = True
    derived_type: bool = False  # type predicted by this tool, with no reference value to compare

    @property
    def degree(self) -> int:
        return self.invariants.degree

    def to_json(self) -> dict:
        return {"t": str(self.t), "status": self.status, "degree": self.degree,
                "invariants": self.invariants.to_json(), "specialization_ok": self.specialization_ok,
                "locus_complete": self.locus_complete,
                "singularities": [r.to_json() for r in self.singularities],
                "derived_type": self.derived_type}


def fiber_analysis(t0, certify: bool = True) -> FiberReport:
    """Invariants and singular points of the fiber D_t0."""
    t0 = Fraction(t0)
    ideal = fiber_ideal(t0)
    phi = fiber_map(t0)
    direct = implicitize(phi)
    same = direct == ideal
    inv = image_invariants(ideal)
    inv.expected_degree = 7
    entry = degenerate_configuration(t0)
    points = predicted_singular_points(entry, phi) if entry is not None else []
    reports: list[SingularityReport] = [analyze_point(ideal, p, lam)[0] for p, lam in points]
    complete = True
    if certify:
        complete = singular_locus_complete(ideal, [p for p, _ in points], len(ideal.arena) - 3).complete
    if not complete:
        status = "undetermined"
    else:
        status = "singular" if reports else "smooth"
    return FiberReport(t0, status, inv, reports, same, complete, derived_type=t0 != 0 and bool(reports))


# Singular fibers -----------------------------------------------------------------

def discriminant() -> MPoly:
    """Discriminant in u of u^2 - t(u + 1): the fibers where C_t is not two points."""
    T = MPoly.var((PARAM,), PARAM)
    return T * T + T * 4


def rational_roots(p: MPoly) -> tuple[list[Fraction], MPoly]:
    """Rational roots of a univariate polynomial and the factor left without them.

    Candidates are +-(divisor of the constant term)/(divisor of the leading
    coefficient) after clearing denominators; roots are divided out with
    multiplicity.
    """
    var = p.arena[0]
    p = _integral(p)
    roots: list[Fraction] = []
    X = MPoly.var(p.arena, var)
    while p.degree() > 0:
        low = min(m[0] for m in p.terms)
        if low:
            roots.append(Fraction(0))
            p = p.exact_div(X ** low)
            continue
        lead = abs(int(p.terms[(p.degree(),)]))
        const = abs(int(p.terms[(0,)]))
        found = None
        for q in _divisors(lead):
            for r in _divisors(const):
                for cand in (Fraction(r, q), Fraction(-r, q)):
                    if p.evaluate([cand]) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        roots.append(found)
        p = p.exact_div(X - found)
    return sorted(set(roots)), p


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# Chart reductions -------------------------------------------------------------------

@dataclass
class ChartReduction:
    """The chart {name = 1} with graph variables substituted away.

    ``images`` gives each eliminated variable as a polynomial in ``arena``;
    the chart is isomorphic to V(gens) in ``arena``.
    """

    name: str
    arena: tuple[str, ...]
    gens: list
    images: dict

    def coordinate(self, v: str) -> MPoly:
        if v == self.name:
            return MPoly.const(self.arena, 1)
        return self.images[v] if v in self.images else MPoly.var(self.arena, v)


def reduce_graph(gens: Sequence[MPoly], arena: Sequence[str], keep: set) -> tuple[list, tuple, dict]:
    """Repeatedly solve a generator c*v + R (R free of v, c constant) for v.

    Substituting v = -R/c is an isomorphism of the zero set onto its
    projection, so singularities are unaffected.
    """
    arena = tuple(arena)
    gens = [g for g in gens if not g.is_zero()]
    images: dict = {}
    while True:
        hit = None
        for g in sorted(gens, key=lambda g: (len(g.terms), g.degree(), str(g))):
            for i, v in enumerate(arena):
                if v in keep or g.degree_in(v) != 1:
                    continue
                lin = [(m, c) for m, c in g.terms.items() if m[i] == 1]
                if len(lin) == 1 and sum(lin[0][0]) == 1:
                    hit = (g, v, lin[0][1])
                    break
            if hit:
                break
        if hit is None:
            return gens, arena, images
        g, v, c = hit
        rest = tuple(w for w in arena if w != v)
        img = ((MPoly.var(arena, v) * c - g) * (1 / Fraction(c))).to_arena(rest)
        gens = [h.subs({v: img}, rest) for h in gens]
        gens = [h for h in gens if not h.is_zero()]
        images = {w: q.subs({v: img}, rest) for w, q in images.items()}
        images[v] = img
        arena = rest


def chart_reductions(ideal: HomogIdeal, coords: Sequence[str], param: str) -> list[ChartReduction]:
    """Reduced affine charts {a_k = 1}, smallest first."""
    out = []
    for name in coords:
        rest = tuple(v for v in ideal.arena if v != name)
        gens = [g.subs({name: MPoly.const(rest, 1)}, rest) for g in ideal.groebner()]
        g2, ar, images = reduce_graph(gens, rest, {param})
        while True:
            size = len(ar)
            g2 = HomogIdeal(g2, ar).groebner() if g2 else []
            g2, ar2, more = reduce_graph(g2, ar, {param})
            for v, img in more.items():
                images = {w: q.subs({v: img}, ar2) for w, q in images.items()}
                images[v] = img
            ar = ar2
            if len(ar) == size:
                break
        out.append(ChartReduction(name, ar, g2, images))
    out.sort(key=lambda c: (len(c.arena), coords.index(c.name)))
    return out


@dataclass
class ChartLocus:
    chart: str
    variables: int  # fiber variables left after graph reduction
    determinants: int
    generator: MPoly | None  # generator of the t-projection, None if not principal or not found
    conclusive: bool

    @property
    def empty(self) -> bool:
        g = self.generator
        return self.conclusive and g is not None and g.is_constant() and not g.is_zero()

    def to_json(self) -> dict:
        return {"chart": self.chart, "variables": self.variables, "determinants": self.determinants,
                "generator": None if self.generator is None else str(self.generator),
                "conclusive": self.conclusive}


def relative_singular_locus(ideal: HomogIdeal, coords: Sequence[str], param: str, fiber_dim: int = 2,
                            total_space: bool = False, seed: int = 0, max_dets: int = 6,
                            deadline: float | None = None) -> list[ChartLocus] | None:
    """Projection to the parameter line of the singular points of the fibers.

    Charts are processed smallest first; in each one the coordinates of
    earlier charts are set to zero, since those points are already
    covered.  The Jacobian (in the fiber variables, plus the parameter when
    ``total_space``) is taken of the reduced chart ideal.  All maximal
    minors are added when there are few of them, which gives the exact
    locus; otherwise random integer combinations det(R J Q) are used.  Every
    singular point lies in their zero set, so the values found are then a
    superset of the true ones (and the unit ideal proves there are none).
    Returns None when the deadline passes.
    """
    rng = random.Random(seed)
    done: list[str] = []
    out = []
    for red in chart_reductions(ideal, coords, param):
        if deadline is not None and time.monotonic() > deadline:
            return None
        # variables forced to zero by earlier charts are substituted directly
        zero = {}
        cons = []
        for v in done:
            c = red.coordinate(v)
            if len(c.terms) == 1 and c.degree() == 1 and sum(c.terms.values()) != 0:
                zero[next(w for w, e in zip(red.arena, next(iter(c.terms))) if e)] = 0
            else:
                cons.append(c)
        arena = tuple(v for v in red.arena if v not in zero)
        gens = [g.subs(zero, arena) for g in red.gens]
        cons = [c.subs(zero, arena) for c in cons]
        fiber_vars = [v for v in red.arena if v != param]
        cols = fiber_vars + ([param] if total_space else [])
        codim = len(fiber_vars) - fiber_dim
        done.append(red.name)
        if codim <= 0:
            out.append(ChartLocus(red.name, len(fiber_vars), 0, MPoly.const((param,), 1), True))
            continue
        J = [[g.diff(v).subs(zero, arena) for v in cols] for g in red.gens]
        base = [g for g in gens + cons if not g.is_zero()]
        if comb(len(J), codim) * comb(len(cols), codim) <= MAX_MINORS:
            dets = [d for d in _all_minors(J, codim) if not d.is_zero()]
            result = _projection(base + dets, arena, param)
            if result is None:  # exact minors: singular over the whole parameter line
                result = MPoly.zero((param,))
        else:
            dets, result = [], None
            for _ in range(max_dets):
                R = [[rng.randint(-2, 2) for _ in J] for _ in range(codim)]
                Q = [[rng.randint(-2, 2) for _ in range(codim)] for _ in cols]
                det = _det_mod(_combine(J, R, Q, arena), lambda f: f)
                if det.is_zero():
                    continue
                dets.append(det)
                gen = _projection(base + dets, arena, param)
                if gen is not None and gen.is_constant():
                    result = gen
                    break
                if total_space or gen is None:
                    continue
                if result is not None and gen == result:
                    break  # stable under a further random minor
                result = gen
            else:
                if total_space or len(dets) < 2:
                    result = None
        out.append(ChartLocus(red.name, len(fiber_vars), len(dets), result, result is not None))
    return out


def _all_minors(J, k: int) -> list[MPoly]:
    out = []
    for rows in combinations(range(len(J)), k):
        for cols in combinations(range(len(J[0])), k):
            out.append(_det_mod([[J[r][c] for c in cols] for r in rows], lambda f: f))
    return out


def _projection(gens, arena, param: str) -> MPoly | None:
    """Generator of (gens) intersected with Q[param]; None if that ideal is zero."""
    K = HomogIdeal(gens, arena)
    if K.is_unit():
        return MPoly.const((param,), 1)
    elim = [v for v in arena if v != param]
    E = eliminate(K, elim) if elim else K
    gb = [g.to_arena((param,)) for g in E.groebner()]
    return gb[0] if len(gb) == 1 else None


@dataclass
class FiberLocus:
    values: list  # rational t values with a singular fiber
    charts: list = field(default_factory=list)
    irrational: list = field(default_factory=list)  # factors without rational roots
    generic: bool = False  # every fiber is singular

    @property
    def conclusive(self) -> bool:
        return all(c.conclusive for c in self.charts)

    def to_json(self) -> dict:
        return {"locus": [str(v) for v in self.values], "conclusive": self.conclusive,
                "irrational_factors": [str(f) for f in self.irrational], "generic": self.generic,
                "charts": [c.to_json() for c in self.charts]}


def singular_fiber_locus(seed: int = 0, ideal: HomogIdeal | None = None, coords: Sequence[str] = TARGET,
                         param: str = PARAM) -> FiberLocus:
    """Parameter values t whose fiber D_t is singular."""
    charts = relative_singular_locus(ideal or family_ideal(), coords, param, seed=seed)
    values: set = set()
    irrational = []
    generic = False
    for c in charts:
        if c.generator is None or (c.generator.is_constant() and not c.generator.is_zero()):
            continue
        if c.generator.is_zero():
            generic = True
            continue
        roots, rest = rational_roots(c.generator)
        values.update(roots)
        if rest.degree() > 0:
            irrational.append(rest)
    return FiberLocus(sorted(values), charts, irrational, generic)


@dataclass
class TotalSpaceResult:
    status: str  # "pass" | "fail" | "skipped"
    charts: list = field(default_factory=list)
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"status": self.status, "seconds": round(self.seconds, 2),
                "charts": [c.to_json() for c in self.charts]}


def total_space_smoothness(enabled: bool = False, budget: float = 600.0, ideal: HomogIdeal | None = None,
                           coords: Sequence[str] = TARGET, param: str = PARAM, seed: int = 0) -> TotalSpaceResult:
    """Is the total space of the family nonsingular?  Off unless enabled."""
    if not enabled:
        return TotalSpaceResult("skipped")
    start = time.monotonic()
    ideal = ideal or family_ideal()
    charts = relative_singular_locus(ideal, coords, param, total_space=True, seed=seed,
                                     deadline=start + budget)
    elapsed = time.monotonic() - start
    if charts is None:
        return TotalSpaceResult("skipped", [], elapsed)
    ok = all(c.empty for c in charts)
    return TotalSpaceResult("pass" if ok else "fail", charts, elapsed)
