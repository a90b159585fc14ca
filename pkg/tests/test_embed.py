from fractions import Fraction

import pytest

from dpverify.algebra import HomogIdeal, MPoly, linear_solve, parse_poly, rank
from dpverify.catalog import catalog, get_entry
from dpverify.embed import (MONOMIALS, SOURCE, AnticanonicalMap, BasisValidationError, anticanonical_map,
                            base_conditions, coeffs_of_cubic, cubic_system, image_invariants, implicitize,
                            is_singular_point, predicted_singular_points, quadric_generated,
                            satisfies_conditions, singular_locus_complete)

I0 = ("ce-df", "d^2-ae", "cd-af", "bd-e^2+f^2", "ab-de+cf")


def _value_row(pt):
    return [Fraction(pt[0] ** m[0] * pt[1] ** m[1] * pt[2] ** m[2]) for m in MONOMIALS]


def _dx1_row(pt):
    return [Fraction(m[1] * pt[0] ** m[0] * (pt[1] ** (m[1] - 1) if m[1] else 0) * pt[2] ** m[2]) for m in MONOMIALS]


def _same_rows(a, b):
    return rank(a) == rank(b) == rank(list(a) + list(b))


def _substitute(ideal, phi):
    return [g.subs(dict(zip(phi.target, phi.components)), SOURCE) for g in ideal.generators]


# base conditions ---------------------------------------------------------------

def test_conditions_s4pp():
    rows = base_conditions(get_entry("S4''"))
    want = [_value_row((1, 0, 0)), _value_row((1, 0, 1)), _value_row((1, 0, -1)), _dx1_row((1, 0, 0))]
    assert len(rows) == 4 and _same_rows(rows, want)


def test_conditions_s1():
    assert _same_rows(base_conditions(get_entry("S1")), [_value_row((1, 0, 0))])


def test_conditions_s7():
    rows = base_conditions(get_entry("S7"))
    assert _same_rows(rows, [_value_row((1, 0, 0)), _dx1_row((1, 0, 0))])


@pytest.mark.parametrize("entry", catalog(), ids=lambda e: e.id)
def test_system_dimension(entry):
    system = cubic_system(entry)
    assert system.dimension == entry.degree + 1
    assert all(satisfies_conditions(entry, f) for f in system.basis)


def test_dimension_examples():
    assert cubic_system("S4''").dimension == 6
    assert cubic_system("P2").dimension == 10
    assert cubic_system("S9'").dimension == 6


# maps ------------------------------------------------------------------------------

def test_s4pp_preset():
    phi = anticanonical_map("S4''")
    want = ["x1^3", "x2^3-x0^2*x2", "x0*x1^2", "x1^2*x2", "x1*x2^2", "x0*x1*x2"]
    assert phi.components == [parse_poly(t, SOURCE) for t in want]
    assert phi.target == tuple("abcdef")


def test_bad_basis_rejected():
    cubics = [parse_poly(t, SOURCE) for t in ["x0^3", "x1^3", "x2^3", "x0*x1*x2", "x1^2*x2", "x1*x2^2"]]
    with pytest.raises(BasisValidationError):
        anticanonical_map("S4''", basis_choice=cubics)


def test_components_must_be_independent():
    f = parse_poly("x1^3", SOURCE)
    with pytest.raises(ValueError):
        AnticanonicalMap([f, f * 2])


# implicitization ---------------------------------------------------------------------

def test_s4pp_ideal_is_I0():
    ideal = implicitize(anticanonical_map("S4''"))
    assert ideal == HomogIdeal.parse(I0, tuple("abcdef"))


def test_conic_veronese_toy():
    conics = [parse_poly(t, SOURCE) for t in ["x0^2", "x0*x1", "x0*x2", "x1^2", "x1*x2", "x2^2"]]
    phi = AnticanonicalMap(conics)
    ideal = implicitize(phi)
    # 2x2 minors of the symmetric matrix [[a,b,c],[b,d,e],[c,e,f]]
    minors = HomogIdeal.parse(["ad-b^2", "ae-bc", "af-c^2", "be-cd", "bf-ce", "df-e^2"], tuple("abcdef"))
    assert ideal == minors
    assert all(g.is_zero() for g in _substitute(ideal, phi))
    inv = image_invariants(ideal)
    assert (inv.dim, inv.degree, inv.quadric_generated) == (2, 4, True)


@pytest.mark.parametrize("entry", catalog(), ids=lambda e: e.id)
def test_ideal_vanishes_on_parametrization(entry):
    phi = anticanonical_map(entry)
    ideal = implicitize(phi)
    assert all(g.is_zero() for g in _substitute(ideal, phi))


def test_p2_cubic_veronese_degree():
    ideal = implicitize(anticanonical_map("P2"))
    assert image_invariants(ideal, "P2").to_json() == {"dim": 2, "degree": 9, "quadric_generated": True}
    # oracle: two generic hyperplane sections meet the surface in 9 points
    arena = ideal.arena
    h1 = sum((MPoly.var(arena, v) * (i + 1) for i, v in enumerate(arena)), MPoly.zero(arena))
    h2 = sum((MPoly.var(arena, v) * ((i * i) % 7 - 3) for i, v in enumerate(arena)), MPoly.zero(arena))
    from dpverify.algebra import proj_dim_degree
    assert proj_dim_degree(ideal + [h1, h2]) == (0, 9)


def test_s1_invariants():
    ideal = implicitize(anticanonical_map("S1"))
    assert image_invariants(ideal, "S1").to_json() == {"dim": 2, "degree": 8, "quadric_generated": True}


def test_quadric_generated_definition():
    # the twisted cubic is cut out by quadrics; a plane cubic curve is not
    tc = HomogIdeal.parse(["ac-b^2", "bd-c^2", "ad-bc"], tuple("abcd"))
    assert quadric_generated(tc)
    assert not quadric_generated(HomogIdeal.parse(["a^3-b^2c"], tuple("abc")))


def test_basis_independence():
    """Preset and echelon bases give ideals related by the induced linear change."""
    entry = get_entry("S4''")
    preset = anticanonical_map(entry)
    canon = anticanonical_map(entry, use_preset=False)
    # preset_i = sum_j A_ij canon_j
    C = [coeffs_of_cubic(f) for f in canon.components]
    A = []
    for f in preset.components:
        target = coeffs_of_cubic(f)
        rows = [[C[j][m] for j in range(len(C))] + [-target[m]] for m in range(len(MONOMIALS))]
        kernel, _ = linear_solve(rows, len(C) + 1)
        (vec,) = kernel
        A.append([c / vec[-1] for c in vec[:-1]])
    I_p, I_c = implicitize(preset), implicitize(canon)
    arena = I_c.arena
    images = {v: sum((MPoly.var(arena, w) * a for w, a in zip(arena, row) if a), MPoly.zero(arena))
              for v, row in zip(I_p.arena, A)}
    moved = HomogIdeal([g.subs(images, arena) for g in I_p.generators], arena)
    assert moved == I_c


# predicted singular points -----------------------------------------------------------

def test_s4pp_singular_point():
    pts = predicted_singular_points("S4''")
    assert pts == [((0, 1, 0, 0, 0, 0), 2)]


def test_s3_has_none():
    assert predicted_singular_points("S3") == []


def test_s7_single_point():
    phi = anticanonical_map("S7")
    ideal = implicitize(phi)
    (pt, n), = predicted_singular_points("S7", phi)
    assert n == 1
    assert is_singular_point(ideal, pt, len(ideal.arena) - 3)


@pytest.mark.parametrize("entry", catalog(), ids=lambda e: e.id)
def test_predicted_points_are_singular(entry):
    phi = anticanonical_map(entry)
    ideal = implicitize(phi)
    pts = predicted_singular_points(entry, phi)
    assert len(pts) == len(entry.expected_singularities)
    assert sorted(n for _, n in pts) == sorted(entry.expected_singularities)
    for pt, _ in pts:
        assert is_singular_point(ideal, pt, entry.degree - 2)


@pytest.mark.parametrize("entry_id", ["S4''", "S9'", "S6''", "S3'", "S4"])
def test_singular_locus_complete_quick(entry_id):
    phi = anticanonical_map(entry_id)
    ideal = implicitize(phi)
    pts = [p for p, _ in predicted_singular_points(entry_id, phi)]
    check = singular_locus_complete(ideal, pts, len(ideal.arena) - 3)
    assert check.complete
    assert sum(check.local_lengths) == check.degree


def test_singular_locus_incomplete_when_point_missing():
    phi = anticanonical_map("S6")
    ideal = implicitize(phi)
    pts = [p for p, _ in predicted_singular_points("S6", phi)]
    assert len(pts) == 2
    assert not singular_locus_complete(ideal, pts[:1], len(ideal.arena) - 3).complete
