"""Anticanonical models: cubics through the base configuration and their image."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from math import gcd as gcd_int

from .algebra import (HomogIdeal, MonomialOrder, MPoly, NotDivisible, buchberger, eliminate, linear_solve,
                      proj_dim_degree, rank)
from .algebra.ideal import dim_degree_from_numerator, hilbert_numerator
from .algebra.local import local_length
from .algebra.linalg import rref
from .catalog import (CatalogEntry, chart_chain, exceptional_chart, get_entry, line_through, minus_two_chains)

SOURCE = ("x0", "x1", "x2")
TARGET_NAMES = tuple("abcdefghij")


class ChartError(RuntimeError):
    """A chart computation failed where exactness was guaranteed."""


class ConditionDependence(RuntimeError):
    pass


class BasisValidationError(ValueError):
    pass


def cubic_monomials(degree: int = 3) -> list[tuple[int, int, int]]:
    """Monomials of the given degree, lex x0 > x1 > x2 (x0^3 first)."""
    mons = [m for m in product(range(degree + 1), repeat=3) if sum(m) == degree]
    return sorted(mons, reverse=True)


MONOMIALS = cubic_monomials()
_MONO_POLYS = [MPoly.monomial(SOURCE, m) for m in MONOMIALS]


def cubic_from_coeffs(coeffs: Sequence) -> MPoly:
    out = MPoly.zero(SOURCE)
    for c, m in zip(coeffs, _MONO_POLYS):
        if c:
            out = out + m * c
    return out


def coeffs_of_cubic(f: MPoly) -> list[Fraction]:
    if f.arena != SOURCE:
        f = f.to_arena(SOURCE)
    if not f.is_zero() and (f.degree() != 3 or not f.is_homogeneous()):
        raise ValueError(f"{f} is not a cubic form")
    return [Fraction(f.terms.get(m, 0)) for m in MONOMIALS]


def _point_functional(entry: CatalogEntry, i: int, cubics: Sequence[MPoly]) -> list[Fraction]:
    """Value of the point-i condition on each cubic (cubics through all ancestors)."""
    chart = chart_chain(entry, i)
    divisor = MPoly.const(chart.vars, 1)
    for j in entry.ancestors(i):
        divisor = divisor * chart.exceptional[j]
    origin = {v: 0 for v in chart.vars}
    out = []
    for f in cubics:
        g = chart.pullback_cubic(f)
        try:
            g = g.exact_div(divisor)
        except NotDivisible:
            raise ChartError(f"{entry.id}: pullback at p{i} not divisible by {divisor}") from None
        out.append(g.evaluate(origin))
    return out


def _free_kernel(rows, n: int) -> tuple[list[int], list[list[Fraction]]]:
    """Kernel basis with a 1 on its own free column and 0 on the other free columns."""
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(n) if c not in pivots]
    kernel = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        kernel.append(v)
    return free, kernel


def base_conditions(entry: CatalogEntry | str) -> list[list[Fraction]]:
    """One linear condition on the 10 cubic coefficients per base point.

    Conditions of infinitely near points only make sense on cubics through
    the earlier points, so each row is computed on the current kernel basis
    and extended by zero on its pivot columns.
    """
    if isinstance(entry, str):
        entry = get_entry(entry)
    rows: list[list[Fraction]] = []
    for p in entry.points:
        free, kernel = _free_kernel(rows, len(MONOMIALS))
        values = _point_functional(entry, p.index, [cubic_from_coeffs(v) for v in kernel])
        row = [Fraction(0)] * len(MONOMIALS)
        for col, val in zip(free, values):
            row[col] = val
        if not any(row):
            raise ConditionDependence(f"{entry.id}: condition of p{p.index} is dependent")
        rows.append(row)
    return rows


@dataclass
class CubicSystem:
    basis: list[MPoly]
    condition_matrix: list[list[Fraction]]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def cubic_system(entry: CatalogEntry | str) -> CubicSystem:
    if isinstance(entry, str):
        entry = get_entry(entry)
    rows = base_conditions(entry)
    if rows:
        kernel, r = linear_solve(rows, len(MONOMIALS))
    else:
        kernel, r = linear_solve([[0] * len(MONOMIALS)], len(MONOMIALS))
    if len(kernel) != entry.degree + 1:
        raise ConditionDependence(f"{entry.id}: system has dimension {len(kernel)}, expected {entry.degree + 1}")
    # deterministic echelon basis: leading monomial first
    red, _ = rref(kernel)
    return CubicSystem([cubic_from_coeffs(v) for v in red], rows)


@dataclass
class AnticanonicalMap:
    components: list[MPoly]
    source: tuple[str, ...] = SOURCE
    target: tuple[str, ...] = ()
    entry_id: str | None = None

    def __post_init__(self):
        if not self.target:
            self.target = target_arena(len(self.components))
        if len(self.target) != len(self.components):
            raise ValueError("one target coordinate per component")
        degs = {f.degree() for f in self.components}
        if len(degs) != 1 or not all(f.is_homogeneous() for f in self.components):
            raise ValueError("components must be forms of one common degree")
        mons = sorted({m for f in self.components for m in f.terms})
        mat = [[f.terms.get(m, 0) for m in mons] for f in self.components]
        if rank(mat) != len(self.components):
            raise ValueError("components are linearly dependent")

    @property
    def degree(self) -> int:
        return self.components[0].degree()

    def __call__(self, point: Sequence) -> list[Fraction]:
        return [f.evaluate(point) for f in self.components]


def target_arena(n: int) -> tuple[str, ...]:
    if n <= len(TARGET_NAMES):
        return TARGET_NAMES[:n]
    return tuple(f"y{i}" for i in range(n))


def _presets() -> dict[str, list[str]]:
    return {
        "S4''": ["x1^3", "x2^3 - x0^2*x2", "x0*x1^2", "x1^2*x2", "x1*x2^2", "x0*x1*x2"],
    }


PRESETS = _presets()


def satisfies_conditions(entry: CatalogEntry, f: MPoly) -> bool:
    """Does the cubic f pass through every base point (including infinitely near ones)?"""
    for p in entry.points:
        try:
            (val,) = _point_functional(entry, p.index, [f])
        except ChartError:
            return False
        if val:
            return False
    return True


def anticanonical_map(entry: CatalogEntry | str, basis_choice: Sequence[MPoly] | None = None,
                      use_preset: bool = True) -> AnticanonicalMap:
    if isinstance(entry, str):
        entry = get_entry(entry)
    if basis_choice is None and use_preset and entry.id in PRESETS:
        basis_choice = [MPoly.parse(s, SOURCE) for s in PRESETS[entry.id]]
    if basis_choice is None:
        return AnticanonicalMap(cubic_system(entry).basis, entry_id=entry.id)
    comps = [f.to_arena(SOURCE) if f.arena != SOURCE else f for f in basis_choice]
    if len(comps) != entry.degree + 1:
        raise BasisValidationError(f"{entry.id}: need {entry.degree + 1} cubics, got {len(comps)}")
    for f in comps:
        if not satisfies_conditions(entry, f):
            raise BasisValidationError(f"{entry.id}: {f} does not pass through the base points")
    if rank([coeffs_of_cubic(f) for f in comps]) != len(comps):
        raise BasisValidationError(f"{entry.id}: chosen cubics are dependent")
    return AnticanonicalMap(comps, entry_id=entry.id)


def implicitize(phi: AnticanonicalMap) -> HomogIdeal:
    """Ideal of the closure of the image, by eliminating the source variables."""
    arena = tuple(phi.source) + tuple(phi.target)
    gens = []
    for name, f in zip(phi.target, phi.components):
        gens.append(MPoly.var(arena, name) - f.to_arena(arena))
    weights = {v: 1 for v in phi.source}
    weights.update({v: phi.degree for v in phi.target})
    ideal = eliminate(HomogIdeal(gens, arena), phi.source, weights=weights)
    if not ideal.homogeneous:
        raise ChartError("implicitization returned a non-homogeneous ideal")
    return ideal


@dataclass
class ImageInvariants:
    dim: int
    degree: int
    quadric_generated: bool
    expected_degree: int | None = None

    @property
    def ok(self) -> bool:
        return self.dim == 2 and self.quadric_generated and (
            self.expected_degree is None or self.degree == self.expected_degree)

    def to_json(self) -> dict:
        return {"dim": self.dim, "degree": self.degree, "quadric_generated": self.quadric_generated}


def quadric_generated(ideal: HomogIdeal) -> bool:
    """True iff the degree-2 part of the ideal generates it."""
    gb = ideal.groebner()
    quads = [g for g in gb if g.degree() == 2]
    if len(quads) == len(gb):
        return True
    if not quads:
        return False
    sub = HomogIdeal(quads, ideal.arena)
    return all(sub.contains(g) for g in gb if g.degree() != 2)


def image_invariants(ideal: HomogIdeal, entry: CatalogEntry | str | None = None) -> ImageInvariants:
    if isinstance(entry, str):
        entry = get_entry(entry)
    dim, deg = proj_dim_degree(ideal)
    return ImageInvariants(dim, deg, quadric_generated(ideal), entry.degree if entry else None)


# Singular points -------------------------------------------------------------------

def normalize_point(pt: Sequence) -> tuple[Fraction, ...]:
    pt = [Fraction(x) for x in pt]
    lead = next((x for x in pt if x), None)
    if lead is None:
        raise ChartError("zero vector is not a projective point")
    return tuple(x / lead for x in pt)


def _divide_common(comps: list[MPoly], vars_: Sequence[str]) -> list[MPoly]:
    for v in vars_:
        X = MPoly.var(comps[0].arena, v)
        while True:
            try:
                trial = [g.exact_div(X) for g in comps]
            except NotDivisible:
                break
            comps = trial
    return comps


def _image_on_exceptional(entry: CatalogEntry, phi: AnticanonicalMap, i: int) -> tuple[Fraction, ...]:
    children = [p.direction for p in entry.points if p.parent == i]
    bad = {Fraction(v, u) for u, v in children if u}
    chart = exceptional_chart(entry, i, (1, 0))
    exc_vars = [v for v in chart.vars if any(eq.degree_in(v) for eq in chart.exceptional.values())]
    comps = _divide_common([chart.pullback_cubic(f) for f in phi.components], exc_vars)
    alpha, gamma = chart.vars
    images = []
    for g0 in (Fraction(3), Fraction(-5, 2), Fraction(7)):
        if g0 in bad:
            continue
        vals = [g.evaluate({alpha: 0, gamma: g0}) for g in comps]
        if any(vals):
            images.append(normalize_point(vals))
    if not images:
        raise ChartError(f"{entry.id}: every component vanishes along E{i}")
    if len(set(images)) != 1:
        raise ChartError(f"{entry.id}: E{i}^ is not contracted by the map")
    return images[0]


def _image_on_line(entry: CatalogEntry, phi: AnticanonicalMap, pts: Sequence[int]) -> tuple[Fraction, ...]:
    L = line_through(entry, pts)
    c0, c1, c2 = (Fraction(L.terms.get(m, 0)) for m in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    # two points spanning the line, then sample along it
    if c2:
        P = (c2, 0, -c0)
        Q = (0, c2, -c1)
    elif c1:
        P = (c1, -c0, 0)
        Q = (0, 0, 1)
    else:
        P = (0, 1, 0)
        Q = (0, 0, 1)
    images = []
    for s in (Fraction(2), Fraction(-3), Fraction(5, 3)):
        x = [p + s * q for p, q in zip(P, Q)]
        vals = phi(x)
        if any(vals):
            images.append(normalize_point(vals))
    if not images:
        raise ChartError(f"{entry.id}: line {pts} lies in the base locus")
    if len(set(images)) != 1:
        raise ChartError(f"{entry.id}: line {pts} is not contracted by the map")
    return images[0]


def curve_image(entry: CatalogEntry, phi: AnticanonicalMap, curve) -> tuple[Fraction, ...]:
    """Image point of a contracted (-2)-curve."""
    if curve.h == 0:
        i = next(k + 1 for k, e in enumerate(curve.e) if e == -1)
        return _image_on_exceptional(entry, phi, i)
    pts = [k + 1 for k, e in enumerate(curve.e) if e == 1]
    return _image_on_line(entry, phi, pts)


def predicted_singular_points(entry: CatalogEntry | str, phi: AnticanonicalMap | None = None
                              ) -> list[tuple[tuple[Fraction, ...], int]]:
    """(point, chain length) for each (-2)-chain, in chain order."""
    if isinstance(entry, str):
        entry = get_entry(entry)
    phi = phi or anticanonical_map(entry)
    out = []
    for chain in minus_two_chains(entry):
        images = {curve_image(entry, phi, c) for c in chain}
        if len(images) != 1:
            raise ChartError(f"{entry.id}: a (-2)-chain maps to several points {images}")
        out.append((images.pop(), len(chain)))
    return out


# Jacobian and singular locus ------------------------------------------------------

def jacobian(gens: Sequence[MPoly], arena: Sequence[str]) -> list[list[MPoly]]:
    return [[g.diff(v) for v in arena] for g in gens]


def jacobian_rank_at(ideal: HomogIdeal, point: Sequence) -> int:
    gb = ideal.groebner()
    vals = dict(zip(ideal.arena, point))
    return rank([[d.evaluate(vals) for d in row] for row in jacobian(gb, ideal.arena)])


def on_variety(ideal: HomogIdeal, point: Sequence) -> bool:
    vals = dict(zip(ideal.arena, point))
    return all(g.evaluate(vals) == 0 for g in ideal.generators)


def is_singular_point(ideal: HomogIdeal, point: Sequence, codim: int) -> bool:
    return on_variety(ideal, point) and jacobian_rank_at(ideal, point) < codim


def _det_mod(matrix: list[list[MPoly]], reducer) -> MPoly:
    """Determinant by Laplace expansion over memoised minors, reduced mod an ideal."""
    n = len(matrix)
    memo: dict = {}

    def minor(row: int, cols: tuple[int, ...]) -> MPoly:
        if row == n:
            return MPoly.const(matrix[0][0].arena, 1)
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = MPoly.zero(matrix[0][0].arena)
        for k, c in enumerate(cols):
            entry = matrix[row][c]
            if entry.is_zero():
                continue
            sub = minor(row + 1, cols[:k] + cols[k + 1:])
            term = entry * sub
            acc = acc - term if k % 2 else acc + term
        acc = reducer(acc)
        memo[key] = acc
        return acc

    return minor(0, tuple(range(n)))


@dataclass
class LocusCheck:
    complete: bool
    minors_used: int
    degree: int = 0
    local_lengths: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"complete": self.complete, "minors_used": self.minors_used,
                "degree": self.degree, "local_lengths": self.local_lengths}


def dehomogenize_at(polys: Sequence[MPoly], point: Sequence) -> tuple[list[MPoly], tuple[str, ...]]:
    """Affine chart at a nonzero coordinate of ``point``, translated to the origin."""
    arena = polys[0].arena
    pt = normalize_point(point)
    k = next(i for i, x in enumerate(pt) if x)
    rest = tuple(v for i, v in enumerate(arena) if i != k)
    images = {arena[k]: MPoly.const(rest, 1)}
    for i, v in enumerate(arena):
        if i != k:
            images[v] = MPoly.var(rest, v) + pt[i]
    return [f.subs(images, rest) for f in polys], rest


PRIME = 2147483647


def singular_locus_complete(ideal: HomogIdeal, points: Sequence[Sequence], codim: int,
                            seed: int = 0, max_dets: int = 12, prime: int = PRIME) -> LocusCheck:
    """Check that every singular point of V(ideal) is among ``points``.

    Integer combinations det(R J Q) of maximal Jacobian minors vanish on
    the singular locus, so K = ideal + (dets) has Sing V(ideal) inside V(K).
    Reduction mod p can only lower the rank of each Macaulay matrix, so the
    Hilbert function of K over Q is bounded by that of K mod p.  If K mod p
    is zero-dimensional of degree D and the exact local lengths of K at the
    given points already add up to D, then V(K) is exactly those points and
    there are no other singular points.  Determinants are added one at a
    time until that happens.
    """
    rng = random.Random(seed)
    arena = ideal.arena
    gb = ideal.groebner()
    red = ideal.reducer()
    if quadric_generated(ideal):
        gb = [g for g in gb if g.degree() == 2]
    gb = [_integral(g) for g in gb]
    J = jacobian(gb, arena)
    dets: list[MPoly] = []
    degree = 0
    for _ in range(max_dets):
        R = [[rng.randint(-2, 2) for _ in gb] for _ in range(codim)]
        Q = [[rng.randint(-2, 2) for _ in range(codim)] for _ in arena]
        det = _det_mod(_combine(J, R, Q, arena), red.reduce)
        if det.is_zero():
            continue
        dets.append(_integral(det))
        if len(dets) < 2:
            continue
        leads = [_lead_exponent(g) for g in buchberger(gb + dets, modulus=prime)]
        dim, degree = dim_degree_from_numerator(hilbert_numerator(leads, len(arena)), len(arena))
        if dim > 1:
            continue
        if dim <= 0:
            return LocusCheck(not points, len(dets), 0, [])
        lengths = []
        for pt in points:
            local, _ = dehomogenize_at(gb + dets, pt)
            lengths.append(local_length(local)[0])
        if sum(lengths) == degree:
            return LocusCheck(True, len(dets), degree, lengths)
    return LocusCheck(False, len(dets), degree, [])


def _integral(f: MPoly) -> MPoly:
    """Scale to coprime integer coefficients."""
    den = 1
    for c in f.terms.values():
        den = den * c.denominator // gcd_int(den, c.denominator)
    f = f * den
    g = 0
    for c in f.terms.values():
        g = gcd_int(g, int(c))
    return f * Fraction(1, g) if g > 1 else f


def _lead_exponent(g: MPoly) -> tuple:
    return max(g.terms, key=MonomialOrder.grevlex(len(g.arena)).key)


def _combine(J: list[list[MPoly]], R, Q, arena) -> list[list[MPoly]]:
    """The square matrix R J Q for integer matrices R and Q."""
    zero = MPoly.zero(arena)
    JQ = [[sum((row[c] * Q[c][k] for c in range(len(row)) if Q[c][k]), zero) for k in range(len(Q[0]))]
          for row in J]
    return [[sum((JQ[r][k] * Rrow[r] for r in range(len(JQ)) if Rrow[r]), zero) for k in range(len(Q[0]))]
            for Rrow in R]


@dataclass
class EmbeddingResult:
    entry_id: str
    map: AnticanonicalMap
    ideal: HomogIdeal
    invariants: ImageInvariants
    singular_points: list

    def to_json(self) -> dict:
        return {
            "id": self.entry_id,
            "cubics": [f.to_str() for f in self.map.components],
            "ideal": [g.to_str() for g in self.ideal.groebner()],
            "invariants": self.invariants.to_json(),
            "singular_points": [{"point": [str(x) for x in p], "chain_length": n}
                                for p, n in self.singular_points],
        }


def embed(entry: CatalogEntry | str) -> EmbeddingResult:
    if isinstance(entry, str):
        entry = get_entry(entry)
    phi = anticanonical_map(entry)
    ideal = implicitize(phi)
    inv = image_invariants(ideal, entry)
    return EmbeddingResult(entry.id, phi, ideal, inv, predicted_singular_points(entry, phi))
