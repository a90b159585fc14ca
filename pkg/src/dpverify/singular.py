"""Local analysis at singular points: jet models, Tjurina algebras, ADE type.

A singular point of the anticanonical model is moved to the origin of an
affine chart.  Generators with independent linear parts are solved for
their pivot variables as truncated power series; what is left is a single
equation in three variables, whose Tjurina algebra is computed on jets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import HomogIdeal, MPoly, linear_solve, rank, rref
from .algebra.local import TruncationTooSmall, jet_ideal_space, jet_quotient
from .catalog import CatalogEntry, get_entry
from .embed import EmbeddingResult, dehomogenize_at, embed, normalize_point, on_variety

NOT_A_TYPE = "not A-type"
MAX_ORDER = 12


class NotOnVariety(ValueError):
    """The point does not satisfy the ideal."""


class EmbeddingDimensionError(ValueError):
    """The tangent space at the origin is not 3-dimensional."""


class NotAHypersurface(ValueError):
    """The residual equations are not generated by a single one."""


@dataclass(frozen=True)
class JetSeries:
    """A polynomial known modulo terms of total degree >= order."""

    poly: MPoly
    order: int

    def __post_init__(self):
        object.__setattr__(self, "poly", self.poly.truncate(self.order))

    @property
    def arena(self) -> tuple[str, ...]:
        return self.poly.arena

    def _check(self, other: JetSeries) -> int:
        if other.arena != self.arena:
            raise ValueError("jets over different variables")
        return min(self.order, other.order)

    def __add__(self, other: JetSeries) -> JetSeries:
        return JetSeries(self.poly + other.poly, self._check(other))

    def __sub__(self, other: JetSeries) -> JetSeries:
        return JetSeries(self.poly - other.poly, self._check(other))

    def __mul__(self, other) -> JetSeries:
        if isinstance(other, JetSeries):
            self._check(other)
            # a jet of order n times one of order m is known to order min(n + v(g), m + v(f))
            n = min(self.order + _valuation(other.poly), other.order + _valuation(self.poly))
            return JetSeries(self.poly * other.poly, n)
        return JetSeries(self.poly * other, self.order)

    def diff(self, name: str) -> JetSeries:
        return JetSeries(self.poly.diff(name), self.order - 1)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __str__(self) -> str:
        return f"{self.poly} + O({self.order})"


def _valuation(f: MPoly) -> int:
    return f.min_degree() if not f.is_zero() else 10 ** 6


@dataclass
class LocalIdeal:
    """Dehomogenized generators with the point moved to the origin."""

    generators: list[MPoly]
    arena: tuple[str, ...]
    center: tuple[Fraction, ...]
    chart: int  # index of the coordinate set to 1


@dataclass
class LocalModel:
    center: tuple
    chart: int
    arena: tuple[str, ...]  # all local variables
    eliminated: dict  # variable -> JetSeries in the free variables
    f: JetSeries
    order: int
    solved: list[int] = field(default_factory=list)  # indices of the generators used

    @property
    def free(self) -> tuple[str, ...]:
        return self.f.arena

    def substitute(self, g: MPoly) -> JetSeries:
        """Restrict a local function to the hypersurface chart."""
        images = {v: s.poly for v, s in self.eliminated.items()}
        return JetSeries(g.subs(images, self.free) if images else g.to_arena(self.free), self.order)


@dataclass
class SingularityReport:
    point: tuple
    type: str
    tjurina: int
    hessian_corank: int
    local_equation: JetSeries
    basis: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"point": [str(x) for x in self.point], "type": self.type, "tjurina": self.tjurina,
                "hessian_corank": self.hessian_corank, "local_equation_jet": str(self.local_equation.poly),
                "truncation": self.local_equation.order}


def localize(ideal: HomogIdeal, point: Sequence) -> LocalIdeal:
    """Dehomogenize at the first nonzero coordinate of ``point`` and translate it to 0."""
    if len(point) != len(ideal.arena):
        raise ValueError(f"point has {len(point)} coordinates, arena has {len(ideal.arena)}")
    if not on_variety(ideal, point):
        raise NotOnVariety(f"{list(point)} is not on the variety")
    gens, rest = dehomogenize_at(ideal.generators, point)
    pt = normalize_point(point)
    chart = next(i for i, x in enumerate(pt) if x)
    return LocalIdeal([g for g in gens if not g.is_zero()], rest, pt, chart)


def _linear_row(g: MPoly, arena) -> list[Fraction]:
    row = [Fraction(0)] * len(arena)
    for m, c in g.terms.items():
        if sum(m) == 1:
            row[m.index(1)] = c
    return row


def local_model(local: LocalIdeal, order: int) -> LocalModel:
    """Reduce to a hypersurface in three variables, up to terms of degree ``order``."""
    arena = local.arena
    gens = local.generators
    n = len(arena)
    if any(g.constant_term() for g in gens):
        raise NotOnVariety("origin is not on the variety")
    rows = [_linear_row(g, arena) for g in gens]
    if rank(rows) != n - 3:
        raise EmbeddingDimensionError(f"linear parts have rank {rank(rows)}, expected {n - 3}")
    chosen: list[int] = []
    for i, row in enumerate(rows):
        if rank([rows[j] for j in chosen] + [row]) > len(chosen):
            chosen.append(i)
        if len(chosen) == n - 3:
            break
    # combinations of the chosen generators whose linear parts are in reduced echelon form
    lin = [rows[i] for i in chosen]
    R, pivots = rref([r + [Fraction(int(k == j)) for k in range(len(lin))] for j, r in enumerate(lin)])
    pivots = [p for p in pivots if p < n]
    combos = []
    for r in R[:len(pivots)]:
        g = MPoly.zero(arena)
        for j, c in enumerate(r[n:]):
            if c:
                g = g + gens[chosen[j]] * c
        combos.append(g)
    solved_vars = [arena[p] for p in pivots]
    free = tuple(v for v in arena if v not in solved_vars)
    # x_p = x_p - combo(x): a contraction on jets, each pass gains one order
    sol = {v: MPoly.zero(free) for v in solved_vars}
    for _ in range(order):
        images = {**sol}
        new = {}
        for v, g in zip(solved_vars, combos):
            rhs = MPoly.var(arena, v) - g
            new[v] = rhs.subs(images, free).truncate(order)
        if new == sol:
            break
        sol = new
    model_sol = {v: JetSeries(s, order) for v, s in sol.items()}
    residuals = []
    for i, g in enumerate(gens):
        r = g.subs(sol, free).truncate(order)
        if i in chosen and not r.is_zero():
            raise ArithmeticError("jet solution does not satisfy its own equation")
        if not r.is_zero():
            residuals.append(r)
    if not residuals:
        raise NotAHypersurface("all residuals vanish to the working order; raise the order")
    residuals.sort(key=lambda r: (r.min_degree(), len(r.terms)))
    for f in residuals:
        ech, _ = jet_ideal_space([f], order)
        if all(ech.contains(r.terms) for r in residuals):
            return LocalModel(local.center, local.chart, arena, model_sol, JetSeries(f, order), order, chosen)
    raise NotAHypersurface("no single residual generates the others")


def hessian_corank(f: JetSeries) -> int:
    """3 minus the rank of the quadratic part of f."""
    vars_ = f.arena
    H = [[f.poly.diff(a).diff(b).constant_term() for b in vars_] for a in vars_]
    return len(vars_) - rank(H)


def tjurina(f: JetSeries) -> tuple[int, list[tuple[int, ...]]]:
    """Dimension and monomial basis of k[[x]]/(f, df) computed on jets.

    The partials are known modulo degree ``order - 1``; the quotient is
    computed at orders ``order - 2`` and ``order - 1`` and must agree
    (then m^(order-2) lies in the ideal by Nakayama).
    """
    gens = [f.poly] + [f.poly.diff(v) for v in f.arena]
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise TruncationTooSmall("equation vanishes to the working order")
    lo, hi = f.order - 2, f.order - 1
    if lo < 1:
        raise TruncationTooSmall(f"order {f.order} too small")
    b_lo = jet_quotient(gens, lo)
    b_hi = jet_quotient(gens, hi)
    if len(b_lo) != len(b_hi):
        raise TruncationTooSmall(f"Tjurina algebra not stable at order {f.order}")
    return len(b_hi), b_hi


def classify_ade(f: JetSeries) -> str:
    """A_tau when the Hessian has corank <= 1, otherwise NOT_A_TYPE."""
    if any(sum(m) == 0 for m in f.poly.terms):
        raise ValueError("equation does not vanish at the origin")
    if any(sum(m) == 1 for m in f.poly.terms):
        return "smooth"
    if hessian_corank(f) > 1:
        return NOT_A_TYPE
    tau, _ = tjurina(f)
    return f"A{tau}"


def analyze_point(ideal: HomogIdeal, point: Sequence, expected: int = 1) -> tuple[SingularityReport, LocalModel]:
    """Local model and A-type at one singular point, escalating the truncation."""
    local = localize(ideal, point)
    order = expected + 3
    while True:
        try:
            model = local_model(local, order)
            tau, basis = tjurina(model.f)
            corank = hessian_corank(model.f)
            kind = f"A{tau}" if corank <= 1 else NOT_A_TYPE
            return SingularityReport(local.center, kind, tau, corank, model.f, basis), model
        except (TruncationTooSmall, NotAHypersurface):
            if order + 2 > MAX_ORDER:
                raise
            order += 2


def _result(entry: CatalogEntry | str | EmbeddingResult) -> EmbeddingResult:
    if isinstance(entry, EmbeddingResult):
        return entry
    return embed(entry if isinstance(entry, CatalogEntry) else get_entry(entry))


def singularities(entry: CatalogEntry | str | EmbeddingResult) -> list[tuple[SingularityReport, LocalModel]]:
    """Analyze every predicted singular point of an entry's anticanonical model."""
    res = _result(entry)
    return [analyze_point(res.ideal, pt, lam) for pt, lam in res.singular_points]


def _jet_normal_forms(model: LocalModel, forms: Sequence[MPoly], lam: int) -> list[dict]:
    f = model.f
    gens = [f.poly] + [f.poly.diff(v) for v in f.arena]
    ech, _ = jet_ideal_space([g for g in gens if not g.is_zero()], lam)
    out = []
    for s in forms:
        jet = model.substitute(s).poly.truncate(lam)
        out.append(ech.reduce(jet.terms))
    return out


def _restrict_form(local_arena, center, chart, s: MPoly) -> MPoly:
    """Linear form on P^d to a function on the affine chart around ``center``."""
    images = {s.arena[chart]: MPoly.const(local_arena, 1)}
    for i, v in enumerate(s.arena):
        if i != chart:
            images[v] = MPoly.var(local_arena, v) + center[i]
    return s.subs(images, local_arena)


def jacobian_membership(model: LocalModel, s: MPoly, lam: int | None = None) -> bool:
    """Does the linear form s lie in the Tjurina ideal at the model's center?

    Decided modulo m^lam, which the Tjurina ideal of an A_lam point contains.
    """
    if lam is None:
        lam = tjurina(model.f)[0]
    g = _restrict_form(model.arena, model.center, model.chart, s)
    return not _jet_normal_forms(model, [g], lam)[0]


@dataclass
class KernelResult:
    entry_id: str
    dim_total: int
    dim_kernel: int
    expected: int
    conditions: list  # reduced echelon rows in the coefficients of a, b, c, ...

    @property
    def passed(self) -> bool:
        return self.dim_kernel == self.expected

    def to_json(self) -> dict:
        return {"id": self.entry_id, "dim_total": self.dim_total, "dim_kernel": self.dim_kernel,
                "expected": self.expected, "pass": self.passed,
                "conditions": [[str(c) for c in row] for row in self.conditions]}


def kernel_analysis(entry: CatalogEntry | str | EmbeddingResult) -> KernelResult:
    """Hyperplane sections lying in the Tjurina ideal at every singular point."""
    res = _result(entry)
    arena = res.ideal.arena
    forms = MPoly.gens(arena)
    rows: list[list[Fraction]] = []
    for report, model in singularities(res):
        lam = report.tjurina
        nfs = [_jet_normal_forms(model, [_restrict_form(model.arena, model.center, model.chart, s)], lam)[0]
               for s in forms]
        keys = sorted({k for nf in nfs for k in nf})
        # s = sum mu_j x_j is in the ideal iff every normal-form coordinate vanishes
        rows.extend([nf.get(k, Fraction(0)) for nf in nfs] for k in keys)
    n = len(forms)
    conds = [r for r in rref(rows)[0] if any(r)]
    kernel, _ = linear_solve(rows, n)
    expected = n - get_entry(res.entry_id).sum_lambda
    return KernelResult(res.entry_id, n, len(kernel), expected, conds)


def kernel_dimension(entry: CatalogEntry | str | EmbeddingResult) -> int:
    return kernel_analysis(entry).dim_kernel
