"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Monomial = tuple  # tuple[int, ...], one exponent per arena variable


class ArenaMismatch(ValueError):
    """Two polynomials over different variable arenas were combined."""


class NotDivisible(ArithmeticError):
    """Exact polynomial division left a nonzero remainder."""


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    # gmpy2.mpq and friends
    num = getattr(c, "numerator", None)
    den = getattr(c, "denominator", None)
    if num is not None and den is not None:
        return Fraction(int(num), int(den))
    raise TypeError(f"not an exact rational: {c!r}")


class MPoly:
    """Polynomial over Q in a fixed, ordered list of variables (the arena).

    Terms are stored as ``{exponent tuple: Fraction}`` with no zero
    coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("arena", "terms", "_hash")

    def __init__(self, arena: Sequence[str], terms: Mapping[Monomial, object] | None = None):
        self.arena = tuple(arena)
        n = len(self.arena)
        clean = {}
        if terms:
            for m, c in terms.items():
                if len(m) != n:
                    raise ArenaMismatch(f"monomial {m} does not fit arena {self.arena}")
                c = _frac(c)
                if c:
                    clean[tuple(m)] = c
        self.terms = clean
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, arena) -> MPoly:
        return cls(arena)

    @classmethod
    def const(cls, arena, c) -> MPoly:
        arena = tuple(arena)
        return cls(arena, {(0,) * len(arena): c})

    @classmethod
    def var(cls, arena, name: str) -> MPoly:
        arena = tuple(arena)
        exps = [0] * len(arena)
        exps[arena.index(name)] = 1
        return cls(arena, {tuple(exps): 1})

    @classmethod
    def gens(cls, arena) -> list[MPoly]:
        return [cls.var(arena, v) for v in arena]

    @classmethod
    def monomial(cls, arena, exps, coef=1) -> MPoly:
        return cls(arena, {tuple(exps): coef})

    @classmethod
    def parse(cls, text: str, arena: Sequence[str]) -> MPoly:
        return parse_poly(text, arena)

    def _wrap(self, terms: dict) -> MPoly:
        p = MPoly.__new__(MPoly)
        p.arena = self.arena
        p.terms = terms
        p._hash = None
        return p

    def _coerce(self, other) -> MPoly:
        if isinstance(other, MPoly):
            if other.arena != self.arena:
                raise ArenaMismatch(f"{self.arena} vs {other.arena}")
            return other
        return MPoly.const(self.arena, _frac(other))

    # arithmetic ---------------------------------------------------------
    def __add__(self, other) -> MPoly:
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v += c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return self._wrap(out)

    __radd__ = __add__

    def __neg__(self) -> MPoly:
        return self._wrap({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> MPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> MPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> MPoly:
        if not isinstance(other, MPoly):
            c = _frac(other)
            if not c:
                return self._wrap({})
            return self._wrap({m: v * c for m, v in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return self._wrap({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> MPoly:
        if isinstance(other, MPoly):
            return self.exact_div(other)
        c = _frac(other)
        return self._wrap({m: v / c for m, v in self.terms.items()})

    def __pow__(self, k: int) -> MPoly:
        if k < 0:
            raise ValueError("negative power")
        result = MPoly.const(self.arena, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.arena == other.arena and self.terms == other.terms
        try:
            return self == self._coerce(other)
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.arena, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    # inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.arena), Fraction(0))

    def degree(self, weights: Sequence[int] | None = None) -> int:
        """Total (optionally weighted) degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if weights is None:
            return max(sum(m) for m in self.terms)
        return max(sum(w * e for w, e in zip(weights, m)) for m in self.terms)

    def min_degree(self) -> int:
        if not self.terms:
            return -1
        return min(sum(m) for m in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.arena.index(name)
        return max((m[i] for m in self.terms), default=-1)

    def is_homogeneous(self, weights: Sequence[int] | None = None) -> bool:
        if weights is None:
            degs = {sum(m) for m in self.terms}
        else:
            degs = {sum(w * e for w, e in zip(weights, m)) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_part(self, k: int) -> MPoly:
        return self._wrap({m: c for m, c in self.terms.items() if sum(m) == k})

    def truncate(self, n: int) -> MPoly:
        """Drop every term of total degree >= n."""
        return self._wrap({m: c for m, c in self.terms.items() if sum(m) < n})

    def variables(self) -> set[str]:
        used = set()
        for m in self.terms:
            for name, e in zip(self.arena, m):
                if e:
                    used.add(name)
        return used

    def content(self) -> Fraction:
        """Positive rational c with self / c primitive integral."""
        from math import gcd

        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> MPoly:
        """Integral primitive multiple, positive leading coefficient (lex)."""
        if not self.terms:
            return self
        c = self.content()
        lead = max(self.terms)
        if self.terms[lead] < 0:
            c = -c
        return self * (1 / c)

    # calculus / substitution -------------------------------------------
    def diff(self, name: str) -> MPoly:
        i = self.arena.index(name)
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = list(m)
                mm[i] = e - 1
                out[tuple(mm)] = c * e
        return self._wrap(out)

    def evaluate(self, values: Mapping[str, object] | Sequence) -> Fraction:
        """Evaluate at a point given positionally or as ``{name: value}``."""
        if isinstance(values, Mapping):
            vals = [_frac(values[v]) for v in self.arena]
        else:
            vals = [_frac(v) for v in values]
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in zip(vals, m):
                if e:
                    t *= v ** e
            total += t
        return total

    def subs(self, mapping: Mapping[str, object], arena: Sequence[str] | None = None) -> MPoly:
        """Substitute polynomials (over ``arena``) or numbers for variables.

        Variables not in ``mapping`` are carried over by name and must exist
        in the target arena.
        """
        target = tuple(arena) if arena is not None else self.arena
        images = []
        for name in self.arena:
            if name in mapping:
                img = mapping[name]
                if not isinstance(img, MPoly):
                    img = MPoly.const(target, img)
                elif img.arena != target:
                    raise ArenaMismatch(f"image of {name} lives in {img.arena}, expected {target}")
            else:
                img = MPoly.var(target, name)
            images.append(img)
        cache: dict = {}

        def power(i: int, e: int) -> MPoly:
            key = (i, e)
            if key not in cache:
                cache[key] = images[i] ** e
            return cache[key]

        acc: dict = {}
        for m, c in self.terms.items():
            t = MPoly.const(target, c)
            for i, e in enumerate(m):
                if e:
                    t = t * power(i, e)
            for mm, cc in t.terms.items():
                acc[mm] = acc.get(mm, 0) + cc
        return MPoly(target, acc)

    def to_arena(self, arena: Sequence[str]) -> MPoly:
        """Re-express over another arena containing every used variable."""
        arena = tuple(arena)
        pos = []
        for i, name in enumerate(self.arena):
            pos.append(arena.index(name) if name in arena else None)
        n = len(arena)
        out = {}
        for m, c in self.terms.items():
            mm = [0] * n
            for i, e in enumerate(m):
                if e:
                    j = pos[i]
                    if j is None:
                        raise ArenaMismatch(f"variable {self.arena[i]} missing from {arena}")
                    mm[j] = e
            out[tuple(mm)] = c
        return MPoly(arena, out)

    def exact_div(self, other: MPoly) -> MPoly:
        """Quotient q with self == q * other; raises NotDivisible otherwise."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        lead_o = max(other.terms)
        lc_o = other.terms[lead_o]
        rem = dict(self.terms)
        quot = {}
        while rem:
            lead = max(rem)
            if any(a < b for a, b in zip(lead, lead_o)):
                raise NotDivisible(f"{self} is not divisible by {other}")
            q = tuple(a - b for a, b in zip(lead, lead_o))
            c = rem[lead] / lc_o
            quot[q] = c
            for m, v in other.terms.items():
                mm = tuple(a + b for a, b in zip(m, q))
                nv = rem.get(mm, 0) - c * v
                if nv:
                    rem[mm] = nv
                else:
                    rem.pop(mm, None)
        return self._wrap(quot)

    def divides(self, other: MPoly) -> bool:
        try:
            other.exact_div(self)
        except NotDivisible:
            return False
        return True

    # display -------------------------------------------------------------
    def sorted_terms(self, order=None) -> list[tuple[Monomial, Fraction]]:
        if order is None:
            from .orders import MonomialOrder

            order = MonomialOrder.grevlex(len(self.arena))
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def to_str(self, order=None, strict: bool | None = None) -> str:
        if not self.terms:
            return "0"
        if strict is None:
            strict = any(len(v) > 1 for v in self.arena)
        parts = []
        for m, c in self.sorted_terms(order):
            factors = []
            for name, e in zip(self.arena, m):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors) if strict else "".join(factors)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not factors:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}" if strict else f"{a}{mono}"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += sign + body
        return out

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"MPoly({self.to_str()!r}, arena={list(self.arena)})"


_TERM = re.compile(r"([+-]?)([^+-]+)")
_NUMBER = re.compile(r"\d+(?:/\d+)?")


def parse_poly(text: str, arena: Sequence[str]) -> MPoly:
    """Parse ``ce-fe^2+f^3`` style text against an arena.

    Single-letter arenas allow juxtaposition (``fe^2``); if any arena name is
    longer than one character the strict mode applies and factors must be
    separated by ``*``.  Coefficients may be integers or fractions ``p/q``.
    """
    arena = tuple(arena)
    index = {v: i for i, v in enumerate(arena)}
    strict = any(len(v) > 1 for v in arena)
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return MPoly.zero(arena)
    n = len(arena)
    terms: dict = {}
    pos = 0
    for match in _TERM.finditer(s):
        if match.start() != pos:
            raise ValueError(f"cannot parse {text!r}")
        pos = match.end()
        sign, body = match.groups()
        coef = Fraction(-1 if sign == "-" else 1)
        exps = [0] * n
        factors = body.split("*") if strict else _split_juxtaposed(body, arena)
        for f in factors:
            if not f:
                raise ValueError(f"empty factor in {text!r}")
            if _NUMBER.fullmatch(f):
                coef *= Fraction(f)
                continue
            name, _, power = f.partition("^")
            if name not in index:
                raise ValueError(f"unknown variable {name!r} in {text!r}")
            exps[index[name]] += int(power) if power else 1
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coef
    if pos != len(s):
        raise ValueError(f"cannot parse {text!r}")
    return MPoly(arena, terms)


def _split_juxtaposed(body: str, arena: Sequence[str]) -> list[str]:
    out = []
    i = 0
    names = set(arena)
    while i < len(body):
        ch = body[i]
        if ch == "*":
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(body) and (body[j].isdigit() or body[j] == "/"):
                j += 1
            out.append(body[i:j])
            i = j
            continue
        if ch not in names:
            raise ValueError(f"unknown variable {ch!r} in {body!r}")
        j = i + 1
        if j < len(body) and body[j] == "^":
            j += 1
            while j < len(body) and body[j].isdigit():
                j += 1
        out.append(body[i:j])
        i = j
    return out


def polys(texts: Iterable[str], arena: Sequence[str]) -> list[MPoly]:
    return [parse_poly(t, arena) for t in texts]
