import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tightfam.algebra import (
    Chart,
    DiffForm,
    FormalSeries,
    Multivector,
    PolyFunc,
    Scalar,
    bivector_on_forms,
    de_rham_d,
    form_on_vectors,
    interior,
    parse_diff_form,
    parse_multivector,
    parse_polyfunc,
    pi_sharp,
    schouten_bracket,
    wedge3_contraction,
)

R2 = Chart(("x", "y"))
R3 = Chart(("x", "y", "z"))
R4 = Chart(("x", "y", "z", "w"))


def test_poly_arithmetic_and_diff():
    x = PolyFunc.coordinate(R2, "x")
    y = PolyFunc.coordinate(R2, "y")
    p = (x + y) * (x - y)
    assert p == x * x - y * y
    assert p.diff(0) == 2 * x
    assert p.diff(1) == -2 * y
    assert p.evaluate((2, 3)) == FormalSeries.constant(Scalar(-5))
    assert (p - p).is_zero
    assert p.degree() == 2


def test_poly_substitute_composes():
    x = PolyFunc.coordinate(R2, "x")
    y = PolyFunc.coordinate(R2, "y")
    p = x * x + y
    q = p.substitute(R2, [y, x * y])
    assert q == y * y + x * y


def test_wedge_antisymmetry_and_signs():
    dx = DiffForm.basis(R3, "x")
    dy = DiffForm.basis(R3, "y")
    dz = DiffForm.basis(R3, "z")
    assert dx.wedge(dy) == -(dy.wedge(dx))
    assert dx.wedge(dx).is_zero
    assert dy.wedge(dz).wedge(dx) == dx.wedge(dy).wedge(dz)


def test_de_rham_examples():
    # d(x dy) = dx^dy
    omega = parse_diff_form("x*dy", R2)
    assert de_rham_d(omega) == parse_diff_form("dx^dy", R2)
    # d of a constant function is 0
    assert de_rham_d(DiffForm.from_function(PolyFunc.constant(R2, 5))).is_zero
    # top degree on R^3
    assert de_rham_d(parse_diff_form("dx^dy^dz", R3)).is_zero


def _random_poly(rng, chart, degree=2):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        mono = tuple(rng.randint(0, degree) for _ in range(chart.dim))
        if sum(mono) > degree + 1:
            mono = (0,) * chart.dim
        terms[mono] = FormalSeries.constant(Scalar(Fraction(rng.randint(-3, 3))))
    return PolyFunc(chart, terms)


def _random_form(rng, chart, grade):
    comps = {}
    idx = list(range(chart.dim))
    for _ in range(rng.randint(1, 3)):
        key = tuple(sorted(rng.sample(idx, grade)))
        comps[key] = _random_poly(rng, chart)
    return DiffForm(chart, comps)


def _random_multivector(rng, chart, grade):
    comps = {}
    idx = list(range(chart.dim))
    for _ in range(rng.randint(1, 3)):
        key = tuple(sorted(rng.sample(idx, grade)))
        comps[key] = _random_poly(rng, chart)
    return Multivector(chart, comps)


def test_dd_is_zero_random():
    rng = random.Random(7)
    for _ in range(25):
        grade = rng.randint(0, 3)
        omega = _random_form(rng, R4, grade)
        assert de_rham_d(de_rham_d(omega)).is_zero


def test_schouten_examples_pin_the_convention():
    # [x Dy, Dx] = -Dy
    a = parse_multivector("x*Dy", R2)
    b = parse_multivector("Dx", R2)
    assert schouten_bracket(a, b) == parse_multivector("-Dy", R2)
    # constant bivector is Poisson
    pxy = parse_multivector("Dx^Dy", R2)
    assert schouten_bracket(pxy, pxy).is_zero
    # [Dx^Dy, x] = -Dy under this module's convention
    f = Multivector.from_function(PolyFunc.coordinate(R2, "x"))
    assert schouten_bracket(pxy, f) == parse_multivector("-Dy", R2)
    # [X, f] = X(f)
    X = parse_multivector("x*Dx", R2)
    g = Multivector.from_function(parse_polyfunc("x^2*y", R2))
    assert schouten_bracket(X, g) == Multivector.from_function(
        parse_polyfunc("2*x^2*y", R2))


def test_schouten_graded_antisymmetry_and_leibniz():
    rng = random.Random(11)
    for _ in range(15):
        p = rng.randint(1, 3)
        q = rng.randint(0, 3)
        a = _random_multivector(rng, R4, p)
        b = _random_multivector(rng, R4, q)
        sign = (-1) ** (((p - 1) * (q - 1)) % 2)
        assert schouten_bracket(a, b) == -(sign * schouten_bracket(b, a))
    for _ in range(10):
        a = _random_multivector(rng, R4, rng.randint(1, 2))
        b = _random_multivector(rng, R4, rng.randint(0, 2))
        c = _random_multivector(rng, R4, rng.randint(0, 2))
        pa, pb = a.grade(), b.grade()
        lhs = schouten_bracket(a, b.wedge(c))
        rhs = schouten_bracket(a, b).wedge(c) + \
            ((-1) ** (((pa - 1) * pb) % 2)) * b.wedge(schouten_bracket(a, c))
        assert lhs == rhs


def test_schouten_graded_jacobi_random():
    rng = random.Random(13)
    for _ in range(12):
        ga, gb, gc = (rng.randint(1, 3) for _ in range(3))
        a = _random_multivector(rng, R4, ga)
        b = _random_multivector(rng, R4, gb)
        c = _random_multivector(rng, R4, gc)
        lhs = schouten_bracket(a, schouten_bracket(b, c))
        rhs = schouten_bracket(schouten_bracket(a, b), c) + \
            ((-1) ** ((ga - 1) * (gb - 1))) * schouten_bracket(
                b, schouten_bracket(a, c))
        assert lhs == rhs


def test_pi_sharp_and_interior_pins():
    pi = parse_multivector("Dx^Dy", R3)
    assert pi_sharp(pi, parse_diff_form("dx", R3)) == parse_multivector("Dy", R3)
    assert pi_sharp(pi, parse_diff_form("dy", R3)) == parse_multivector("-Dx", R3)
    assert pi_sharp(pi, parse_diff_form("dz", R3)).is_zero
    beta = parse_diff_form("dx^dy", R3)
    X = parse_multivector("Dx", R3)
    assert interior(X, beta) == parse_diff_form("dy", R3)
    assert bivector_on_forms(pi, parse_diff_form("dx", R3),
                             parse_diff_form("dy", R3)) == PolyFunc.constant(R3, 1)


def test_wedge3_contraction_examples():
    # rank-2 bivector against the volume form of R^3
    pi = parse_multivector("Dx^Dy", R3)
    phi = parse_diff_form("dx^dy^dz", R3)
    assert wedge3_contraction(pi, phi).is_zero
    # zero form
    assert wedge3_contraction(pi, DiffForm.zero(R3)).is_zero
    # split-rank bivector on R^4: images Dy, -Dx, Dw wedge to Dx^Dy^Dw
    pi4 = parse_multivector("Dx^Dy + Dz^Dw", R4)
    phi4 = parse_diff_form("dx^dy^dz", R4)
    assert wedge3_contraction(pi4, phi4) == parse_multivector("Dx^Dy^Dw", R4)


def test_form_on_vectors():
    omega = parse_diff_form("dx^dy", R3)
    X = parse_multivector("Dx", R3)
    Y = parse_multivector("Dy", R3)
    assert form_on_vectors(omega, [X, Y]) == PolyFunc.constant(R3, 1)
    assert form_on_vectors(omega, [Y, X]) == PolyFunc.constant(R3, -1)
