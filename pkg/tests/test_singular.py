from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpverify.algebra import HomogIdeal, MPoly, parse_poly
from dpverify.algebra.local import TruncationTooSmall
from dpverify.embed import embed
from dpverify.singular import (NOT_A_TYPE, EmbeddingDimensionError, JetSeries, NotOnVariety, analyze_point,
                               classify_ade, hessian_corank, jacobian_membership, kernel_analysis,
                               kernel_dimension, local_model, localize, tjurina)

CEF = ("c", "e", "f")
XYZ = ("x", "y", "z")
I0 = ("ce-df", "d^2-ae", "cd-af", "bd-e^2+f^2", "ab-de+cf")
P0 = (0, 1, 0, 0, 0, 0)


def jet(text, order, arena=XYZ):
    return JetSeries(parse_poly(text, arena), order)


@pytest.fixture(scope="module")
def s4pp():
    ideal = HomogIdeal.parse(I0, tuple("abcdef"))
    return ideal, analyze_point(ideal, P0, 2)


# jets ------------------------------------------------------------------------------

def test_jet_truncates():
    assert jet("x+x^2+x^3", 3).poly == parse_poly("x+x^2", XYZ)


def test_jet_product_order():
    # (x + O(3)) * (x^2 + O(3)) is known modulo degree 4
    p = jet("x", 3) * jet("x^2", 3)
    assert p.order == 4 and p.poly == parse_poly("x^3", XYZ)


def test_jet_arena_mismatch():
    with pytest.raises(ValueError):
        jet("x", 3) + jet("c", 3, CEF)


# localization -------------------------------------------------------------------------

def test_localize_rejects_points_off_variety():
    ideal = HomogIdeal.parse(I0, tuple("abcdef"))
    with pytest.raises(NotOnVariety):
        localize(ideal, (1, 1, 0, 0, 0, 0))


def test_localize_wrong_length():
    with pytest.raises(ValueError):
        localize(HomogIdeal.parse(I0, tuple("abcdef")), (0, 1, 0))


def test_localize_chart():
    local = localize(HomogIdeal.parse(I0, tuple("abcdef")), (0, 3, 0, 0, 0, 0))
    assert local.chart == 1 and local.arena == tuple("acdef")
    assert local.center == tuple(Fraction(x) for x in P0)


def test_embedding_dimension_checked():
    # the cone over a twisted cubic has a 4-dimensional tangent space at its vertex
    cone = HomogIdeal.parse(["ac-b^2", "bd-c^2", "ad-bc"], tuple("abcde"))
    with pytest.raises(EmbeddingDimensionError):
        local_model(localize(cone, (0, 0, 0, 0, 1)), 5)


# local model of the A2 point ------------------------------------------------------------------

def test_s4pp_local_model(s4pp):
    _, (report, model) = s4pp
    assert model.free == CEF
    assert set(model.eliminated) == {"a", "d"}
    target = parse_poly("ce-fe^2+f^3", CEF)
    f4 = model.f.poly.truncate(4)
    # equal up to a nonzero scalar modulo m^4
    scale = f4.terms[(1, 1, 0)]
    assert f4 == target * scale
    assert report.type == "A2" and report.tjurina == 2 and report.hessian_corank == 1


def test_s4pp_eliminated_series(s4pp):
    _, (_, model) = s4pp
    assert model.eliminated["d"].poly == parse_poly("e^2-f^2", CEF)
    assert model.eliminated["a"].poly.truncate(4) == parse_poly("e^3-ef^2-cf", CEF)


def test_s4pp_tjurina_ideal(s4pp):
    """The Tjurina ideal is (c, e, f^2): its quotient has basis 1, f."""
    _, (report, model) = s4pp
    assert report.basis == [(0, 0, 0), (0, 0, 1)]
    tau, basis = tjurina(model.f)
    assert tau == 2
    ideal = [parse_poly(t, CEF) for t in ("c", "e", "f^2")]
    gens = [model.f.poly] + [model.f.poly.diff(v) for v in CEF]
    from dpverify.algebra.local import in_jet_ideal
    assert all(in_jet_ideal(g, ideal, 4) for g in gens)
    assert all(in_jet_ideal(g, gens, 4) for g in ideal)


def test_truncation_invariance(s4pp):
    ideal, _ = s4pp
    local = localize(ideal, P0)
    a = local_model(local, 5)
    b = local_model(local, 7)
    assert tjurina(a.f)[0] == tjurina(b.f)[0] == 2
    assert a.f.poly == b.f.poly.truncate(5)


# Tjurina numbers -------------------------------------------------------------------------

@pytest.mark.parametrize("text,tau", [("ce-fe^2+f^3", 2), ("c^2+e^2+f^2", 1), ("c^5+ef", 4)])
def test_tjurina_examples(text, tau):
    f = jet(text, 8, CEF)
    assert tjurina(f)[0] == tau
    assert classify_ade(f) == f"A{tau}"


def test_not_a_type():
    assert classify_ade(jet("x^3+y^3+z^3", 6)) == NOT_A_TYPE
    assert hessian_corank(jet("x^3+y^3+z^3", 6)) == 3


def test_smooth_point():
    assert classify_ade(jet("x+y^2", 5)) == "smooth"


def test_truncation_too_small():
    with pytest.raises(TruncationTooSmall):
        tjurina(jet("x^5+yz", 4))


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), st.integers(2, 4))
def test_brieskorn_tjurina(a, b, c):
    """Quasi-homogeneous x^a+y^b+z^c: Tjurina = Milnor = (a-1)(b-1)(c-1)."""
    f = jet(f"x^{a}+y^{b}+z^{c}", a + b + c)
    assert tjurina(f)[0] == (a - 1) * (b - 1) * (c - 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_an_normal_forms(n):
    f = jet(f"x^{n + 1}+yz", n + 4)
    assert classify_ade(f) == f"A{n}"


# Jacobian membership and the kernel ---------------------------------------------------------

def test_s4pp_membership(s4pp):
    ideal, (_, model) = s4pp
    forms = dict(zip(ideal.arena, MPoly.gens(ideal.arena)))
    assert jacobian_membership(model, forms["c"])
    assert not jacobian_membership(model, forms["b"])
    assert not jacobian_membership(model, forms["f"])
    assert jacobian_membership(model, forms["a"])
    assert jacobian_membership(model, forms["e"])


def test_s4pp_kernel_conditions():
    result = kernel_analysis(embed("S4''"))
    # mu_b = mu_f = 0
    assert [[int(x) for x in row] for row in result.conditions] == [[0, 1, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1]]
    assert result.dim_kernel == 4 and result.passed


def test_kernel_dimension_smooth():
    assert kernel_dimension("S3") == 7


def test_kernel_dimension_a4():
    assert kernel_dimension("S9'") == 2
