import random
from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from dpverify.algebra import (HomogIdeal, MonomialOrder, MPoly, Reducer, buchberger, normal_form, parse_poly,
                              s_polynomial)
from strategies import ARENA3, polys

LEX = MonomialOrder.lex(3)
GREVLEX = MonomialOrder.grevlex(3)


def P(text, arena=ARENA3):
    return parse_poly(text, arena)


def is_reduced(gb, order):
    leads = [max(g.terms, key=order.key) for g in gb]
    for i, g in enumerate(gb):
        if g.terms[leads[i]] != 1:
            return False
        for j, m in enumerate(leads):
            if j != i and any(all(a <= b for a, b in zip(m, t)) for t in g.terms):
                return False
    return True


# normal forms -----------------------------------------------------------------

def test_normal_form_examples():
    ar = ("x", "y")
    lex = MonomialOrder.lex(2)
    assert normal_form(P("x^2", ar), [P("x-y", ar)], lex) == P("y^2", ar)
    assert normal_form(P("x-y", ar), [P("x-y", ar)], lex).is_zero()
    assert normal_form(P("x^3-z"), [P("x^2-y")], LEX) == P("xy-z")


def test_normal_form_arena_mismatch():
    with pytest.raises(Exception):
        normal_form(P("x"), [parse_poly("a", ("a",))])


# Buchberger -------------------------------------------------------------------

def test_already_a_basis():
    assert buchberger([P("x"), P("y")], LEX) == [P("y"), P("x")]


def test_twisted_cubic_elimination_part():
    gb = buchberger([P("y-x^2"), P("z-x^3")], LEX)
    free = [g for g in gb if g.degree_in("x") == 0]
    assert free
    t = MPoly.var(("t",), "t")
    images = {"x": t, "y": t ** 2, "z": t ** 3}
    assert all(g.subs(images, ("t",)).is_zero() for g in gb)
    assert HomogIdeal(free, ARENA3).contains(P("y^3-z^2"))


def test_difference_of_generators():
    gb = buchberger([P("x^2-y"), P("x^2-z")], GREVLEX)
    assert HomogIdeal(gb, ARENA3).contains(P("y-z"))
    assert P("y-z") in gb


def test_unit_ideal():
    assert buchberger([P("x"), P("x+1")]) == [MPoly.const(ARENA3, 1)]


def test_modular_basis_agrees_with_rational():
    gens = [P("x^2+2y-z"), P("xy-3z^2"), P("y^2-x+z")]
    p = 32003
    gb_q = buchberger(gens)
    gb_p = buchberger(gens, modulus=p)
    assert [sorted(g.terms) for g in gb_q] == [sorted(g.terms) for g in gb_p]
    for gq, gp in zip(gb_q, gb_p):
        for m, c in gq.terms.items():
            assert (c.numerator * pow(c.denominator, -1, p) - gp.terms[m]) % p == 0


small_ideals = st.lists(polys(max_terms=3, max_degree=3), min_size=1, max_size=3).filter(lambda gs: any(gs))


@settings(max_examples=30)
@given(small_ideals, st.sampled_from([LEX, GREVLEX]))
def test_basis_properties(gens, order):
    gens = [g for g in gens if not g.is_zero()]
    gb = buchberger(gens, order)
    red = Reducer(gb, order)
    # generators reduce to zero: the basis contains the ideal
    assert all(red.contains(g) for g in gens)
    # S-pairs reduce to zero: Buchberger's criterion
    for f, g in combinations(gb, 2):
        assert red.contains(s_polynomial(f, g, order))
    assert is_reduced(gb, order)
    # deterministic canonical output
    assert buchberger(list(reversed(gens)), order) == gb


@settings(max_examples=30)
@given(small_ideals, polys())
def test_normal_form_idempotent(gens, f):
    gens = [g for g in gens if not g.is_zero()]
    gb = buchberger(gens)
    r = normal_form(f, gb)
    assert normal_form(r, gb) == r
    assert HomogIdeal(gb, ARENA3).contains(f - r)


def _sympy_gb(gens, arena, order):
    syms = sympy.symbols(arena)
    exprs = [sympy.sympify(g.to_str(strict=True).replace("^", "**"), locals=dict(zip(arena, syms))) for g in gens]
    G = sympy.groebner(exprs, *syms, order=order, domain="QQ")
    out = []
    for e in G.exprs:
        poly = sympy.Poly(e, *syms)
        lc = poly.LC(order=order)
        out.append({m: Fraction(int(sympy.fraction(c / lc)[0]), int(sympy.fraction(c / lc)[1]))
                    for m, c in zip(poly.monoms(), poly.coeffs())})
    return sorted(sorted(d.items()) for d in out)


@pytest.mark.parametrize("texts,order", [
    (["x^2+y^2+z^2-1", "x-y", "yz-1/2"], "grevlex"),
    (["x^3-2xy", "x^2y-2y^2+x"], "grevlex"),
    (["x^3-2xy", "x^2y-2y^2+x"], "lex"),
    (["xy-z^2", "yz-x^2", "xz-y^2"], "grevlex"),
    (["x^2-y", "x^3-z"], "lex"),
])
def test_matches_sympy(texts, order):
    gens = [P(t) for t in texts]
    mo = MonomialOrder.grevlex(3) if order == "grevlex" else MonomialOrder.lex(3)
    ours = sorted(sorted(g.terms.items()) for g in buchberger(gens, mo))
    assert ours == _sympy_gb(gens, ARENA3, order)


def test_random_ideals_match_sympy():
    rng = random.Random(7)
    for _ in range(6):
        gens = []
        for _ in range(3):
            terms = {tuple(rng.randint(0, 2) for _ in range(3)): Fraction(rng.randint(-3, 3)) for _ in range(3)}
            gens.append(MPoly(ARENA3, terms))
        gens = [g for g in gens if not g.is_zero()]
        ours = sorted(sorted(g.terms.items()) for g in buchberger(gens, GREVLEX))
        assert ours == _sympy_gb(gens, ARENA3, "grevlex")
