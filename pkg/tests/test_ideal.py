import random
from fractions import Fraction

import pytest

from dpverify.algebra import (HomogIdeal, MonomialOrder, MPoly, SingularMatrix, affine_dim, cramer_image_test,
                              eliminate, hilbert_function, linear_solve, parse_poly, proj_dim_degree, quotient,
                              quotient_space_basis, rank, rref, saturate, saturate_linear)

XYZ = ("x", "y", "z")


def ideal(texts, arena=XYZ):
    return HomogIdeal.parse(texts, arena)


# elimination -----------------------------------------------------------------

def test_eliminate_cusp():
    res = eliminate(ideal(["a-x^2", "b-x^3"], ("x", "a", "b")), ["x"])
    assert res.arena == ("a", "b")
    assert res == ideal(["a^3-b^2"], ("a", "b"))


def test_eliminate_everything_in_ideal_gives_zero():
    res = eliminate(ideal(["x"], ("x", "y")), ["x"])
    assert res.generators == []


def test_eliminate_unknown_variable():
    with pytest.raises(Exception):
        eliminate(ideal(["x"]), ["w"])


def _random_univariate(rng, t_arena, max_deg=3):
    terms = {(k,): Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for k in range(1, rng.randint(1, max_deg) + 1)}
    terms[(0,)] = Fraction(rng.randint(-2, 2))
    p = MPoly(t_arena, terms)
    return p if p.degree() > 0 else p + MPoly.var(t_arena, "t")


@pytest.mark.parametrize("seed", range(60))
def test_elimination_matches_parametrization(seed):
    """Oracle: the eliminated generators vanish on the parametrized curve."""
    rng = random.Random(seed)
    targets = ("u", "v", "w")
    arena = ("t",) + targets
    T = ("t",)
    params = [_random_univariate(rng, T) for _ in targets]
    gens = [MPoly.var(arena, y) - p.to_arena(arena) for y, p in zip(targets, params)]
    res = eliminate(HomogIdeal(gens, arena), ["t"])
    assert res.generators, "a curve in 3-space has a nonzero ideal"
    images = {y: p for y, p in zip(targets, params)}
    for g in res.generators:
        assert set(g.arena) == set(targets)
        assert g.subs(images, T).is_zero()
    # and the curve is one-dimensional, so the ideal is not the unit ideal
    assert affine_dim(res) == 1


def test_two_parameter_elimination_oracle():
    rng = random.Random(3)
    src = ("s", "t")
    arena = src + ("a", "b", "c", "d")
    S, T = MPoly.gens(src)
    for _ in range(5):
        params = [S * rng.randint(-2, 2) + T * rng.randint(-2, 2) + S * T * rng.randint(1, 2) + S ** 2 * rng.randint(
            0, 1) for _ in range(4)]
        gens = [MPoly.var(arena, y) - p.to_arena(arena) for y, p in zip("abcd", params)]
        res = eliminate(HomogIdeal(gens, arena), src)
        images = dict(zip("abcd", params))
        assert all(g.subs(images, src).is_zero() for g in res.generators)


# saturation and quotients -------------------------------------------------------

def test_saturate_monomial():
    assert saturate(ideal(["xy"]), parse_poly("x", XYZ)) == ideal(["y"])


def test_saturate_vs_single_quotient():
    # one quotient step gives (x, y); saturating removes the embedded point entirely
    I = ideal(["x^2", "xy"])
    x = parse_poly("x", XYZ)
    assert quotient(I, x) == ideal(["x", "y"])
    assert saturate(I, x).is_unit()


def test_saturate_coprime():
    I = ideal(["x^2+y^2-z^2"])
    assert saturate(I, parse_poly("x+1", XYZ)) == I


def test_saturation_is_stable():
    I = ideal(["x^3y", "x^2z^2", "yz-x"])
    f = parse_poly("x", XYZ)
    once = saturate(I, f)
    assert saturate(once, f) == once


def test_saturate_linear_agrees_with_generic():
    I = ideal(["x^2y", "xyz", "y^3-x^2z"])
    f = parse_poly("x", XYZ)
    assert saturate_linear(I, f) == saturate(I, f)


# quotient algebras ---------------------------------------------------------------

def test_quotient_basis_small():
    assert quotient_space_basis(ideal(["x^2", "y", "z"])) == [(0, 0, 0), (1, 0, 0)]


@pytest.mark.parametrize("lam", [1, 2, 3, 4, 5])
def test_quotient_basis_power(lam):
    basis = quotient_space_basis(ideal([f"x^{lam}", "y", "z"]))
    assert basis == [(k, 0, 0) for k in range(lam)]


def test_quotient_basis_infinite():
    assert quotient_space_basis(ideal(["x"], ("x", "y"))) is None


# Hilbert series ------------------------------------------------------------------

def test_dim_degree_line():
    assert proj_dim_degree(ideal(["x"])) == (1, 1)


def test_dim_degree_twisted_cubic():
    arena = ("a", "b", "c", "d")
    tc = ideal(["ac-b^2", "bd-c^2", "ad-bc"], arena)
    assert proj_dim_degree(tc) == (1, 3)
    # oracle: a generic hyperplane meets the curve in 3 points (s^3 + 2 s^2 t - s t^2 + 5 t^3 has 3 roots)
    hyper = tc + [parse_poly("a+2b-c+5d", arena)]
    assert proj_dim_degree(hyper) == (0, 3)


def test_dim_degree_order_invariant():
    arena = ("a", "b", "c", "d")
    tc = ideal(["ac-b^2", "bd-c^2", "ad-bc"], arena)
    assert proj_dim_degree(tc, MonomialOrder.lex(4)) == proj_dim_degree(tc)


def test_hilbert_function_plane_conic():
    conic = ideal(["xy-z^2"])
    assert [hilbert_function(conic, k) for k in range(5)] == [1, 3, 5, 7, 9]


def test_non_homogeneous_rejected():
    with pytest.raises(ValueError):
        proj_dim_degree(ideal(["x-1"]))


# linear algebra -------------------------------------------------------------------

def test_linear_solve_examples():
    kernel, r = linear_solve([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert kernel == [] and r == 3
    kernel, r = linear_solve([[0, 0, 0], [0, 0, 0]])
    assert len(kernel) == 3 and r == 0
    kernel, r = linear_solve([[1, 1], [2, 2]])
    assert kernel == [[1, -1]] and r == 1


def test_rref_exact():
    R, piv = rref([[2, 4], [1, 3]])
    assert R == [[1, 0], [0, 1]] and piv == [0, 1]
    assert rank([[Fraction(1, 3), Fraction(2, 3)], [1, 2]]) == 1


# Cramer divisibility -------------------------------------------------------------

def test_cramer_identity():
    ar = ("x", "s")
    one, zero = MPoly.const(ar, 1), MPoly.zero(ar)
    v = [parse_poly("x^2+s", ar), parse_poly("3s", ar)]
    assert cramer_image_test([[one, zero], [zero, one]], v)


def test_cramer_blowup_chart():
    # chart (x, xs) of the blow-up of the origin; a constant field (a1, a4) lifts iff a1 = a4 = 0
    ar = ("x", "s")
    X, S = MPoly.gens(ar)
    one, zero = MPoly.const(ar, 1), MPoly.zero(ar)
    M = [[one, zero], [S, X]]
    assert not cramer_image_test(M, [one * 2, one * 3])
    assert cramer_image_test(M, [X, X * S])
    assert cramer_image_test(M, [X * 0, X])


def test_cramer_not_divisible():
    ar = ("x",)
    X = MPoly.var(ar, "x")
    zero = MPoly.zero(ar)
    assert not cramer_image_test([[X, zero], [zero, X]], [MPoly.const(ar, 1), X])


def test_cramer_singular():
    ar = ("x",)
    X = MPoly.var(ar, "x")
    with pytest.raises(SingularMatrix):
        cramer_image_test([[X, X], [X, X]], [X, X])
