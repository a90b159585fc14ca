"""Buchberger's algorithm with the Gebauer-Moeller criteria.

Internally a term is ``(key, exp, coef)``: ``key`` is the packed order key
(an int whose natural ordering is the monomial order), ``exp`` the packed
exponent vector with a guard bit per field so that divisibility is a single
subtraction and mask, and ``coef`` a ``gmpy2.mpq`` (or ``Fraction``).
Both packings are additive, so multiplying by a monomial is two integer
additions.
"""

from __future__ import annotations

import heapq
import logging
from fractions import Fraction
from typing import Sequence

from .orders import MonomialOrder
from .poly import ArenaMismatch, MPoly

try:  # gmpy2 rationals are several times faster than Fraction
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

log = logging.getLogger(__name__)

EXP_BITS = 16
_GUARD = 1 << (EXP_BITS - 1)
_FIELD = (1 << EXP_BITS) - 1


class _Ring:
    """Packing helpers for one arena size and one monomial order."""

    def __init__(self, nvars: int, order: MonomialOrder, weights: Sequence[int] | None = None,
                 modulus: int | None = None):
        if order.nvars != nvars:
            raise ArenaMismatch(f"order is for {order.nvars} variables, arena has {nvars}")
        self.n = nvars
        self.order = order
        self.weights = tuple(weights) if weights is not None else (1,) * nvars
        self.mask = sum(_GUARD << (EXP_BITS * i) for i in range(nvars))
        self.exp_of: dict[int, int] = {}
        self.p = modulus

    def coef(self, c):
        if self.p is None:
            return _Q(c.numerator, c.denominator)
        c = Fraction(c)
        if c.denominator % self.p == 0:
            raise ZeroDivisionError(f"denominator divisible by {self.p}")
        return c.numerator * pow(c.denominator, -1, self.p) % self.p

    def pack(self, m: Sequence[int]) -> int:
        e = 0
        for i, v in enumerate(m):
            e |= v << (EXP_BITS * i)
        return e

    def unpack(self, e: int) -> tuple[int, ...]:
        return tuple((e >> (EXP_BITS * i)) & _FIELD for i in range(self.n))

    def divides(self, le: int, e: int) -> bool:
        return ((e | self.mask) - le) & self.mask == self.mask

    def lcm(self, e1: int, e2: int) -> int:
        out = 0
        for i in range(self.n):
            s = EXP_BITS * i
            out |= max((e1 >> s) & _FIELD, (e2 >> s) & _FIELD) << s
        return out

    def wdeg(self, e: int) -> int:
        return sum(w * ((e >> (EXP_BITS * i)) & _FIELD) for i, w in enumerate(self.weights))

    def from_poly(self, p: MPoly) -> list:
        terms = []
        for m, c in p.terms.items():
            k = self.order.packed_key(m)
            e = self.pack(m)
            self.exp_of[k] = e
            terms.append((k, e, self.coef(c)))
        terms.sort(key=lambda t: t[0], reverse=True)
        return terms

    def to_poly(self, arena, terms) -> MPoly:
        if self.p is not None:
            return MPoly(arena, {self.unpack(e): Fraction(int(c)) for _, e, c in terms})
        return MPoly(arena, {self.unpack(e): Fraction(int(c.numerator), int(c.denominator)) for _, e, c in terms})


class _Elt:
    """A basis element: sorted terms, leading data and sugar degree."""

    __slots__ = ("terms", "lk", "le", "lc", "sugar")

    def __init__(self, terms, sugar):
        self.terms = terms
        self.lk, self.le, self.lc = terms[0]
        self.sugar = sugar


def _monic(terms, p: int | None = None):
    lc = terms[0][2]
    if lc == 1:
        return terms
    if p is not None:
        inv = pow(lc, -1, p)
        return [(k, e, c * inv % p) for k, e, c in terms]
    inv = 1 / lc
    return [(k, e, c * inv) for k, e, c in terms]


def _reduce(ring: _Ring, terms, basis: list[_Elt], full: bool = True):
    """Reduce a term list by ``basis``; returns the sorted remainder."""
    h = {k: c for k, _, c in terms}
    exp_of = ring.exp_of
    mask = ring.mask
    heap = [-k for k in h]
    heapq.heapify(heap)
    rem = []
    lead_data = [(g.le, g.lk, g.lc, g.terms) for g in basis]
    p = ring.p
    while heap:
        k = -heapq.heappop(heap)
        c = h.pop(k, None)
        if c is None:
            continue
        e = exp_of[k]
        em = e | mask
        for le, lk, lc, gterms in lead_data:
            if (em - le) & mask == mask:
                break
        else:
            rem.append((k, e, c))
            if not full:
                for kk in heap:
                    kk = -kk
                    cc = h.pop(kk, None)
                    if cc is not None:
                        rem.append((kk, exp_of[kk], cc))
                rem.sort(key=lambda t: t[0], reverse=True)
                return rem
            continue
        f = c / lc if p is None else c * pow(lc, -1, p) % p
        qk = k - lk
        qe = e - le
        for gk, ge, gc in gterms[1:]:
            nk = gk + qk
            v = h.get(nk)
            if v is None:
                h[nk] = -f * gc if p is None else -f * gc % p
                heapq.heappush(heap, -nk)
                if nk not in exp_of:
                    exp_of[nk] = ge + qe
            else:
                v = v - f * gc if p is None else (v - f * gc) % p
                if v:
                    h[nk] = v
                else:
                    del h[nk]
    return rem


def _spoly(ring: _Ring, g1: _Elt, g2: _Elt, lcm_e: int):
    lcm_k = ring.order.packed_key(ring.unpack(lcm_e))
    ring.exp_of[lcm_k] = lcm_e
    out: dict = {}
    exp_of = ring.exp_of
    for g, sign in ((g1, 1), (g2, -1)):
        qk = lcm_k - g.lk
        qe = lcm_e - g.le
        f = sign / g.lc if ring.p is None else sign * pow(g.lc, -1, ring.p)
        for gk, ge, gc in g.terms[1:]:
            nk = gk + qk
            if nk not in exp_of:
                exp_of[nk] = ge + qe
            out[nk] = out.get(nk, 0) + f * gc
    if ring.p is not None:
        return [(k, exp_of[k], c % ring.p) for k, c in out.items() if c % ring.p]
    return [(k, exp_of[k], c) for k, c in out.items() if c]


def _coprime(ring: _Ring, e1: int, e2: int) -> bool:
    for i in range(ring.n):
        s = EXP_BITS * i
        if (e1 >> s) & _FIELD and (e2 >> s) & _FIELD:
            return False
    return True


class _Pair:
    __slots__ = ("i", "j", "lcm", "key", "sugar")

    def __init__(self, i, j, lcm, key, sugar):
        self.i, self.j, self.lcm, self.key, self.sugar = i, j, lcm, key, sugar

    def sort_key(self):
        return (self.sugar, self.key, self.i, self.j)


def _buchberger_core(ring: _Ring, gens: list) -> list[_Elt]:
    elts: list[_Elt] = []
    active: list[int] = []  # indices into elts forming the current basis G
    pairs: list[_Pair] = []

    def pair_for(i: int, j: int) -> _Pair:
        gi, gj = elts[i], elts[j]
        l = ring.lcm(gi.le, gj.le)
        sug = max(gi.sugar + ring.wdeg(l) - ring.wdeg(gi.le), gj.sugar + ring.wdeg(l) - ring.wdeg(gj.le))
        return _Pair(min(i, j), max(i, j), l, ring.order.packed_key(ring.unpack(l)), sug)

    def update(hidx: int) -> None:
        nonlocal active, pairs
        h = elts[hidx]
        cand = [pair_for(hidx, g) for g in active]
        # criterion M / F: keep a pair unless another pair's lcm properly divides it
        kept = []
        for idx, p in enumerate(cand):
            gi = elts[p.i if p.j == hidx else p.j]
            if _coprime(ring, h.le, gi.le):
                kept.append(p)
                continue
            dominated = False
            for q in cand[idx + 1:]:
                if ring.divides(q.lcm, p.lcm):
                    dominated = True
                    break
            if not dominated:
                for q in kept:
                    if ring.divides(q.lcm, p.lcm):
                        dominated = True
                        break
            if not dominated:
                kept.append(p)
        new_pairs = []
        for p in kept:
            other = elts[p.i if p.j == hidx else p.j]
            if not _coprime(ring, h.le, other.le):  # product criterion
                new_pairs.append(p)
        # chain criterion on old pairs
        survivors = []
        for p in pairs:
            if ring.divides(h.le, p.lcm):
                l1 = ring.lcm(elts[p.i].le, h.le)
                l2 = ring.lcm(elts[p.j].le, h.le)
                if l1 != p.lcm and l2 != p.lcm:
                    continue
            survivors.append(p)
        pairs = survivors + new_pairs
        active = [g for g in active if not ring.divides(h.le, elts[g].le)] + [hidx]

    for terms in gens:
        terms = _reduce(ring, terms, [elts[i] for i in active])
        if not terms:
            continue
        terms = _monic(terms, ring.p)
        elts.append(_Elt(terms, max(ring.wdeg(e) for _, e, _ in terms)))
        update(len(elts) - 1)

    done = 0
    while pairs:
        best = min(range(len(pairs)), key=lambda t: pairs[t].sort_key())
        p = pairs.pop(best)
        s = _spoly(ring, elts[p.i], elts[p.j], p.lcm)
        if not s:
            continue
        s.sort(key=lambda t: t[0], reverse=True)
        r = _reduce(ring, s, [elts[i] for i in active])
        done += 1
        if not r:
            continue
        r = _monic(r, ring.p)
        elts.append(_Elt(r, p.sugar))
        update(len(elts) - 1)
    log.debug("buchberger: %d reductions, %d elements", done, len(active))
    return [elts[i] for i in active]


def _interreduce(ring: _Ring, basis: list[_Elt]) -> list[_Elt]:
    basis = sorted(basis, key=lambda g: g.lk)
    minimal = []
    for g in basis:
        if not any(ring.divides(m.le, g.le) for m in minimal):
            minimal.append(g)
    out = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        tail = _reduce(ring, g.terms[1:], others) if len(g.terms) > 1 else []
        terms = _monic([g.terms[0]] + tail, ring.p)
        out.append(_Elt(terms, g.sugar))
    out.sort(key=lambda g: g.lk)
    return out


def _check_arena(polys: Sequence[MPoly]) -> tuple:
    arena = polys[0].arena
    for p in polys:
        if p.arena != arena:
            raise ArenaMismatch(f"{p.arena} vs {arena}")
    return arena


def buchberger(gens: Sequence[MPoly], order: MonomialOrder | None = None,
               weights: Sequence[int] | None = None, modulus: int | None = None) -> list[MPoly]:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    The result is monic, interreduced and sorted by increasing leading
    monomial, so equal ideals give identical output.  ``weights`` only
    steers the sugar selection strategy.  With a prime ``modulus`` the
    computation is over GF(p) and coefficients come back as integers in
    [0, p).
    """
    gens = [g for g in gens]
    if not gens:
        raise ValueError("empty generator list")
    arena = _check_arena(gens)
    if order is None:
        order = MonomialOrder.grevlex(len(arena))
    ring = _Ring(len(arena), order, weights, modulus)
    packed = [ring.from_poly(g) for g in gens if g]
    packed.sort(key=lambda t: (max(ring.wdeg(e) for _, e, _ in t), t[0][0]))
    if not packed:
        return []
    basis = _interreduce(ring, _buchberger_core(ring, packed))
    return [ring.to_poly(arena, g.terms) for g in basis]


def normal_form(f: MPoly, basis: Sequence[MPoly], order: MonomialOrder | None = None) -> MPoly:
    """Fully reduced remainder of ``f`` on division by ``basis``."""
    if order is None:
        order = MonomialOrder.grevlex(len(f.arena))
    for b in basis:
        if b.arena != f.arena:
            raise ArenaMismatch(f"{b.arena} vs {f.arena}")
    ring = _Ring(len(f.arena), order)
    elts = [_Elt(_monic(ring.from_poly(b)), 0) for b in basis if b]
    if not f:
        return f
    r = _reduce(ring, ring.from_poly(f), elts)
    return ring.to_poly(f.arena, r)


class Reducer:
    """Repeated normal forms against one fixed basis (reuses packings)."""

    def __init__(self, basis: Sequence[MPoly], order: MonomialOrder | None = None):
        basis = [b for b in basis if b]
        self.arena = basis[0].arena if basis else None
        n = len(self.arena) if basis else 0
        self.order = order or MonomialOrder.grevlex(n)
        self.ring = _Ring(n, self.order)
        self.elts = [_Elt(_monic(self.ring.from_poly(b)), 0) for b in basis]
        self.leads = [self.ring.unpack(g.le) for g in self.elts]

    def reduce(self, f: MPoly) -> MPoly:
        if not f or not self.elts:
            return f
        if f.arena != self.arena:
            raise ArenaMismatch(f"{f.arena} vs {self.arena}")
        return self.ring.to_poly(f.arena, _reduce(self.ring, self.ring.from_poly(f), self.elts))

    def contains(self, f: MPoly) -> bool:
        return self.reduce(f).is_zero()


def leading_monomial(p: MPoly, order: MonomialOrder) -> tuple:
    return max(p.terms, key=order.key)


def s_polynomial(f: MPoly, g: MPoly, order: MonomialOrder) -> MPoly:
    lf, lg = leading_monomial(f, order), leading_monomial(g, order)
    l = tuple(max(a, b) for a, b in zip(lf, lg))
    mf = MPoly.monomial(f.arena, [a - b for a, b in zip(l, lf)], 1 / f.terms[lf])
    mg = MPoly.monomial(g.arena, [a - b for a, b in zip(l, lg)], 1 / g.terms[lg])
    return mf * f - mg * g
