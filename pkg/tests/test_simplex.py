import random
from fractions import Fraction

import pytest

from tightfam.algebra import (
    AffineSimplex,
    Chart,
    DiffForm,
    FormalSeries,
    PolyFunc,
    Scalar,
    de_rham_d,
    integrate_over_chain,
    integrate_over_simplex,
    parse_diff_form,
    poincare_homotopy,
)

R1 = Chart(("x",))
R2 = Chart(("x", "y"))
R3 = Chart(("x", "y", "z"))


def test_segment_integral():
    omega = parse_diff_form("x*dx", R1)
    seg = AffineSimplex(R1, [(0,), (1,)])
    assert integrate_over_simplex(omega, seg) == FormalSeries.constant(
        Scalar(Fraction(1, 2)))


def test_triangle_area():
    omega = parse_diff_form("dx^dy", R2)
    tri = AffineSimplex(R2, [(0, 0), (1, 0), (0, 1)])
    assert integrate_over_simplex(omega, tri) == FormalSeries.constant(
        Scalar(Fraction(1, 2)))


def test_zero_form_integral_is_zero():
    tri = AffineSimplex(R2, [(0, 0), (1, 0), (0, 1)])
    assert integrate_over_simplex(DiffForm.zero(R2), tri).is_zero


def test_orientation_reversal_flips_sign():
    omega = parse_diff_form("(x+2*y)*dx^dy", R2)
    t1 = AffineSimplex(R2, [(0, 0), (1, 0), (0, 1)])
    t2 = AffineSimplex(R2, [(1, 0), (0, 0), (0, 1)])
    assert integrate_over_simplex(omega, t1) == -integrate_over_simplex(omega, t2)


def test_degenerate_simplex_rejected():
    with pytest.raises(ValueError):
        AffineSimplex(R2, [(0, 0), (1, 1), (2, 2)])


def test_degree_mismatch_rejected():
    omega = parse_diff_form("dx", R2)
    tri = AffineSimplex(R2, [(0, 0), (1, 0), (0, 1)])
    with pytest.raises(ValueError):
        integrate_over_simplex(omega, tri)


def _random_poly(rng, chart, degree=2):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        mono = tuple(rng.randint(0, 1) for _ in range(chart.dim))
        terms[mono] = FormalSeries.constant(Scalar(Fraction(rng.randint(-4, 4))))
    return PolyFunc(chart, terms)


def _random_form(rng, chart, grade):
    comps = {}
    for _ in range(rng.randint(1, 2)):
        key = tuple(sorted(rng.sample(range(chart.dim), grade)))
        comps[key] = _random_poly(rng, chart)
    return DiffForm(chart, comps)


def _random_simplex(rng, chart, k):
    while True:
        vs = [tuple(Fraction(rng.randint(-2, 2)) for _ in range(chart.dim))
              for _ in range(k + 1)]
        try:
            return AffineSimplex(chart, vs)
        except ValueError:
            continue


def test_stokes_random():
    rng = random.Random(23)
    for k in (1, 2, 3):
        for _ in range(8):
            omega = _random_form(rng, R3, k - 1)
            s = _random_simplex(rng, R3, k)
            lhs = integrate_over_chain(omega, s.boundary())
            rhs = integrate_over_simplex(de_rham_d(omega), s)
            assert lhs == rhs


def test_homotopy_examples():
    assert poincare_homotopy(parse_diff_form("dx", R1), (0,)) == \
        DiffForm.from_function(PolyFunc.coordinate(R1, "x"))
    k = poincare_homotopy(parse_diff_form("dx^dy", R2), (0, 0))
    want = parse_diff_form("1/2*x*dy - 1/2*y*dx", R2)
    assert k == want
    assert poincare_homotopy(DiffForm.zero(R2), (0, 0)).is_zero


def test_homotopy_identity_random():
    rng = random.Random(31)
    center = (Fraction(1, 2), Fraction(-1), Fraction(0))
    for grade in (1, 2, 3):
        for _ in range(8):
            omega = _random_form(rng, R3, grade)
            lhs = de_rham_d(poincare_homotopy(omega, center)) + \
                poincare_homotopy(de_rham_d(omega), center) \
                if grade < 3 else \
                de_rham_d(poincare_homotopy(omega, center))
            assert lhs == omega


def test_homotopy_center_outside_domain_rejected():
    box = Chart(("x",), bounds=[(0, 1)])
    omega = DiffForm.basis(box, "x")
    with pytest.raises(ValueError):
        poincare_homotopy(omega, (5,))
