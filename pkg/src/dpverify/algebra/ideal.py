"""Ideals: cached Groebner bases, elimination, saturation, Hilbert series."""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Iterable, Sequence

from .groebner import Reducer, buchberger, leading_monomial
from .orders import MonomialOrder
from .poly import ArenaMismatch, MPoly


class NotHomogeneous(ValueError):
    pass


class SingularMatrix(ZeroDivisionError):
    pass


def _basis(gens: list[MPoly], order: MonomialOrder, weights=None) -> list[MPoly]:
    """Reduced basis, through the on-disk cache when one is active."""
    from ..cache import active

    store = active()
    if store is None:
        return buchberger(gens, order, weights)
    return store.groebner(gens[0].arena, gens, order, weights)


class HomogIdeal:
    """An ideal given by generators, with reduced Groebner bases cached per order.

    The name follows the main use (homogeneous ideals of projective
    varieties); affine ideals are allowed and simply have
    ``homogeneous == False``.
    """

    def __init__(self, generators: Iterable[MPoly], arena: Sequence[str] | None = None):
        gens = [g for g in generators]
        if arena is None:
            if not gens:
                raise ValueError("arena required for an ideal without generators")
            arena = gens[0].arena
        self.arena = tuple(arena)
        for g in gens:
            if g.arena != self.arena:
                raise ArenaMismatch(f"{g.arena} vs {self.arena}")
        self.generators = [g for g in gens if g]
        self.homogeneous = all(g.is_homogeneous() for g in self.generators)
        self._gb: dict = {}

    def __repr__(self) -> str:
        body = ", ".join(str(g) for g in self.generators)
        return f"HomogIdeal(({body}) in {list(self.arena)})"

    @classmethod
    def parse(cls, texts: Sequence[str], arena: Sequence[str]) -> HomogIdeal:
        return cls([MPoly.parse(t, arena) for t in texts], arena)

    @property
    def nvars(self) -> int:
        return len(self.arena)

    def default_order(self) -> MonomialOrder:
        return MonomialOrder.grevlex(self.nvars)

    def groebner(self, order: MonomialOrder | None = None, weights=None) -> list[MPoly]:
        order = order or self.default_order()
        if order not in self._gb:
            self._gb[order] = _basis(self.generators, order, weights) if self.generators else []
        return self._gb[order]

    def set_groebner(self, basis: list[MPoly], order: MonomialOrder) -> None:
        self._gb[order] = basis

    def reducer(self, order: MonomialOrder | None = None) -> Reducer:
        order = order or self.default_order()
        return Reducer(self.groebner(order), order)

    def normal_form(self, f: MPoly, order: MonomialOrder | None = None) -> MPoly:
        if not self.generators:
            return f
        return self.reducer(order).reduce(f)

    def contains(self, f: MPoly) -> bool:
        return self.normal_form(f).is_zero()

    def contains_ideal(self, other: HomogIdeal) -> bool:
        if not self.generators:
            return not other.generators
        red = self.reducer()
        return all(red.contains(g) for g in other.generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomogIdeal):
            return NotImplemented
        return self.arena == other.arena and self.groebner() == other.groebner()

    __hash__ = None

    def is_unit(self) -> bool:
        gb = self.groebner()
        return len(gb) == 1 and gb[0].is_constant()

    def lead_monomials(self, order: MonomialOrder | None = None) -> list[tuple]:
        order = order or self.default_order()
        return [leading_monomial(g, order) for g in self.groebner(order)]

    def specialize(self, values: dict) -> HomogIdeal:
        """Substitute numbers for some variables and drop them from the arena."""
        rest = tuple(v for v in self.arena if v not in values)
        return HomogIdeal([_specialize(g, values, rest) for g in self.generators], rest)

    def __add__(self, other) -> HomogIdeal:
        extra = other.generators if isinstance(other, HomogIdeal) else list(other)
        return HomogIdeal(self.generators + extra, self.arena)


def _specialize(g: MPoly, values: dict, rest: tuple) -> MPoly:
    keep = [i for i, v in enumerate(g.arena) if v not in values]
    drop = [(i, values[v]) for i, v in enumerate(g.arena) if v in values]
    out: dict = {}
    for m, c in g.terms.items():
        for i, val in drop:
            if m[i]:
                c = c * val ** m[i]
        if not c:
            continue
        mm = tuple(m[i] for i in keep)
        out[mm] = out.get(mm, 0) + c
    return MPoly(rest, out)


def eliminate(ideal: HomogIdeal, drop_vars: Iterable[str], weights: dict | None = None) -> HomogIdeal:
    """Elimination ideal ``ideal ∩ k[remaining variables]``.

    Uses a block order with the dropped variables first; the result lives in
    the arena of the remaining variables (original relative order).
    ``weights`` (name -> int) only tunes pair selection.
    """
    drop = [v for v in ideal.arena if v in set(drop_vars)]
    unknown = set(drop_vars) - set(ideal.arena)
    if unknown:
        raise ArenaMismatch(f"cannot eliminate unknown variables {sorted(unknown)}")
    keep = [v for v in ideal.arena if v not in drop]
    if not drop:
        return HomogIdeal(ideal.generators, ideal.arena)
    if not keep:
        raise ValueError("cannot eliminate every variable")
    arena = tuple(drop + keep)
    gens = [g.to_arena(arena) for g in ideal.generators]
    if not gens:
        return HomogIdeal([], keep)
    order = MonomialOrder.elimination(len(arena), len(drop))
    w = [weights.get(v, 1) for v in arena] if weights else None
    gb = _basis(gens, order, w)
    nd = len(drop)
    kept = [g for g in gb if all(not any(m[:nd]) for m in g.terms)]
    result = HomogIdeal([g.to_arena(keep) for g in kept], keep)
    # the eliminated part of a reduced GB is a reduced GB for the induced order
    result.set_groebner([g.to_arena(keep) for g in kept], MonomialOrder.grevlex(len(keep)))
    return result


def saturate(ideal: HomogIdeal, f: MPoly, aux: str = "_sat") -> HomogIdeal:
    """``ideal : f^∞`` via ``ideal + (1 - aux*f)`` and elimination of ``aux``."""
    if f.arena != ideal.arena:
        raise ArenaMismatch(f"{f.arena} vs {ideal.arena}")
    if aux in ideal.arena:
        raise ValueError(f"auxiliary variable {aux} clashes with the arena")
    arena = (aux,) + ideal.arena
    y = MPoly.var(arena, aux)
    gens = [g.to_arena(arena) for g in ideal.generators]
    gens.append(1 - y * f.to_arena(arena))
    return eliminate(HomogIdeal(gens, arena), [aux])


def saturate_linear(ideal: HomogIdeal, form: MPoly) -> HomogIdeal:
    """``ideal : form^∞`` for a homogeneous ideal and a linear form.

    Changes coordinates so the form becomes the last variable, computes a
    grevlex basis and strips that variable from every element (Bayer).
    """
    if not ideal.homogeneous or not form.is_homogeneous() or form.degree() != 1:
        raise NotHomogeneous("saturate_linear needs a homogeneous ideal and a linear form")
    arena = ideal.arena
    coef = {v: form.terms.get(tuple(int(w == v) for w in arena), 0) for v in arena}
    pivot = next(v for v in reversed(arena) if coef[v])
    new_arena = tuple(v for v in arena if v != pivot) + (pivot,)
    z = MPoly.var(new_arena, pivot)
    # pivot = (z - sum c_w w) / c_pivot, where z now stands for the form
    image = z
    for v in arena:
        if v != pivot and coef[v]:
            image = image - MPoly.var(new_arena, v) * coef[v]
    image = image * (1 / Fraction(coef[pivot]))
    gens = [g.subs({pivot: image}, new_arena) for g in ideal.generators]
    gb = _basis(gens, MonomialOrder.grevlex(len(new_arena)))
    stripped = []
    for g in gb:
        k = min(m[-1] for m in g.terms)
        stripped.append(MPoly(new_arena, {m[:-1] + (m[-1] - k,): c for m, c in g.terms.items()}))
    orig_form = form.to_arena(new_arena)
    return HomogIdeal([g.subs({pivot: orig_form}, new_arena).to_arena(arena) for g in stripped], arena)


def quotient(ideal: HomogIdeal, f: MPoly) -> HomogIdeal:
    """Ideal quotient ``ideal : f`` (via intersection with ``(f)``)."""
    arena = ("_q",) + ideal.arena
    t = MPoly.var(arena, "_q")
    ff = f.to_arena(arena)
    gens = [t * g.to_arena(arena) for g in ideal.generators] + [(1 - t) * ff]
    inter = eliminate(HomogIdeal(gens, arena), ["_q"])
    return HomogIdeal([g.exact_div(f) for g in inter.generators], ideal.arena)


def quotient_space_basis(ideal: HomogIdeal, order: MonomialOrder | None = None, limit: int = 100000):
    """Standard monomials of ``k[arena]/ideal``, or ``None`` if infinitely many."""
    order = order or ideal.default_order()
    n = ideal.nvars
    if not ideal.generators:
        return None
    leads = ideal.lead_monomials(order)
    for i in range(n):
        if not any(m[i] > 0 and sum(m) == m[i] for m in leads):
            return None

    def standard(m):
        return not any(all(a <= b for a, b in zip(l, m)) for l in leads)

    zero = (0,) * n
    if not standard(zero):
        return []
    seen = {zero}
    queue = deque([zero])
    while queue:
        m = queue.popleft()
        for i in range(n):
            mm = list(m)
            mm[i] += 1
            mm = tuple(mm)
            if mm not in seen and standard(mm):
                seen.add(mm)
                queue.append(mm)
                if len(seen) > limit:
                    raise RuntimeError("quotient basis exceeds limit")
    return sorted(seen, key=order.key)


# Hilbert series ---------------------------------------------------------------

def _minimalize(gens: list[tuple]) -> list[tuple]:
    gens = sorted(set(gens), key=sum)
    out: list[tuple] = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def _poly_add(p, q):
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def hilbert_numerator(monomials: Sequence[tuple], nvars: int) -> list[int]:
    """Numerator N(t) of the Hilbert series N(t)/(1-t)^n of k[x]/(monomials)."""
    gens = _minimalize([tuple(m) for m in monomials])
    return _hnum(gens, nvars)


def _hnum(gens: list[tuple], n: int) -> list[int]:
    if not gens:
        return [1]
    if any(sum(g) == 0 for g in gens):
        return [0]
    # pairwise coprime generators: product of (1 - t^deg)
    support = [0] * n
    for g in gens:
        for i, e in enumerate(g):
            if e:
                support[i] += 1
    if max(support) <= 1:
        out = [1]
        for g in gens:
            d = sum(g)
            out = _poly_mul(out, [1] + [0] * (d - 1) + [-1])
        return out
    piv = max(range(n), key=lambda i: (support[i], -i))
    e = [0] * n
    e[piv] = 1
    e = tuple(e)
    plus = _minimalize([g for g in gens if not g[piv]] + [e])
    colon = _minimalize([tuple(max(a - b, 0) for a, b in zip(g, e)) for g in gens])
    return _poly_add(_hnum(plus, n), [0] + _hnum(colon, n))


def dim_degree_from_numerator(num: list[int], nvars: int) -> tuple[int, int]:
    """Krull dimension and degree from a Hilbert series numerator."""
    num = list(num)
    while num and num[-1] == 0:
        num.pop()
    if not num:
        return -1, 0
    k = 0
    while sum(num) == 0:
        # divide by (1 - t)
        q = []
        acc = 0
        for c in num[:-1]:
            acc += c
            q.append(acc)
        num = q
        k += 1
    return nvars - k, sum(num)


def proj_dim_degree(ideal: HomogIdeal, order: MonomialOrder | None = None) -> tuple[int, int]:
    """Projective dimension and degree of a homogeneous ideal (dim -1: empty)."""
    if not ideal.homogeneous:
        raise NotHomogeneous("proj_dim_degree needs a homogeneous ideal")
    order = order or ideal.default_order()
    leads = ideal.lead_monomials(order) if ideal.generators else []
    affine_dim, deg = dim_degree_from_numerator(hilbert_numerator(leads, ideal.nvars), ideal.nvars)
    if affine_dim <= 0:
        return -1, 0
    return affine_dim - 1, deg


def affine_dim(ideal: HomogIdeal) -> int:
    """Krull dimension of k[x]/ideal (any ideal; -1 for the unit ideal)."""
    if not ideal.generators:
        return ideal.nvars
    leads = ideal.lead_monomials(ideal.default_order())
    return dim_degree_from_numerator(hilbert_numerator(leads, ideal.nvars), ideal.nvars)[0]


def hilbert_function(ideal: HomogIdeal, k: int) -> int:
    """dim_k of the degree-k part of k[x]/ideal for a homogeneous ideal."""
    from math import comb

    num = hilbert_numerator(ideal.lead_monomials() if ideal.generators else [], ideal.nvars)
    n = ideal.nvars
    return sum(c * comb(k - i + n - 1, n - 1) for i, c in enumerate(num) if k - i >= 0)


def cramer_image_test(m: Sequence[Sequence[MPoly]], v: Sequence[MPoly]) -> bool:
    """Is ``v`` in the image of the 2x2 polynomial matrix ``m``?

    True iff det(m) divides both ``a*g - c*f`` and ``d*f - b*g`` exactly,
    where ``m = [[a, b], [c, d]]`` and ``v = (f, g)``.
    """
    (a, b), (c, d) = m
    f, g = v
    det = a * d - b * c
    if det.is_zero():
        raise SingularMatrix("det(M) = 0")
    return det.divides(a * g - c * f) and det.divides(d * f - b * g)
