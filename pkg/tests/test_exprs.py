import random
from fractions import Fraction

import pytest

from tightfam.algebra import (
    Chart,
    DiffForm,
    ExprError,
    FormalSeries,
    Multivector,
    PolyFunc,
    ProductChart,
    Scalar,
    format_poly,
    format_tensor,
    parse_diff_form,
    parse_multivector,
    parse_polyfunc,
    parse_value,
)

R2 = Chart(("x", "y"))
R3 = Chart(("x", "y", "z"))


def test_parse_monomials():
    p = parse_polyfunc("3/2*x^2*y", R2)
    x = PolyFunc.coordinate(R2, "x")
    y = PolyFunc.coordinate(R2, "y")
    assert p == x * x * y * Fraction(3, 2)
    assert parse_polyfunc("x - x", R2).is_zero
    assert parse_polyfunc("-2", R2) == PolyFunc.constant(R2, -2)


def test_parse_special_units():
    p = parse_polyfunc("h*x + 2*L + i", R2)
    assert p.terms[(1, 0)] == FormalSeries.hbar()
    const = p.constant_term()
    assert const.coeff(0) == Scalar(0, 1, 2, 0)


def test_parse_forms_and_multivectors():
    omega = parse_diff_form("x*dx^dy", R2)
    assert omega.component((0, 1)) == PolyFunc.coordinate(R2, "x")
    v = parse_multivector("h*Dx^Dy", R2)
    assert v.component((0, 1)) == PolyFunc.constant(R2, FormalSeries.hbar())
    # wedge reorders with a sign
    assert parse_diff_form("dy^dx", R2) == -parse_diff_form("dx^dy", R2)


def test_parse_mixed_bigraded_terms():
    pc = ProductChart(Chart(("x", "y")), Chart(("t",)))
    v = parse_value("h*dt^Dx", pc.chart)
    parts = v.to_pairs()
    assert list(parts) == [((2,), (0,))]


def test_parse_errors():
    with pytest.raises(ExprError):
        parse_polyfunc("q", R2)
    with pytest.raises(ExprError):
        parse_polyfunc("x^y", R2)
    with pytest.raises(ExprError):
        parse_polyfunc("x*dx", R2)  # not a scalar
    with pytest.raises(ExprError):
        parse_diff_form("Dx", R2)
    with pytest.raises(ExprError):
        parse_polyfunc("1/x", R2)
    with pytest.raises(ExprError):
        parse_polyfunc("x +", R2)


def _random_poly(rng, chart):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        mono = tuple(rng.randint(0, 2) for _ in range(chart.dim))
        coeffs = [Scalar(Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
                         Fraction(rng.randint(-1, 1)),
                         Fraction(rng.randint(-1, 1)), 0)
                  for _ in range(3)]
        terms[mono] = FormalSeries(coeffs)
    return PolyFunc(chart, terms)


def test_printer_parser_roundtrip_polys():
    rng = random.Random(5)
    for _ in range(25):
        p = _random_poly(rng, R3)
        assert parse_polyfunc(format_poly(p), R3) == p


def test_printer_parser_roundtrip_tensors():
    rng = random.Random(9)
    for _ in range(15):
        comps = {}
        for _ in range(rng.randint(1, 3)):
            key = tuple(sorted(rng.sample(range(3), rng.randint(1, 2))))
            comps[key] = _random_poly(rng, R3)
        omega = DiffForm(R3, comps)
        assert parse_diff_form(format_tensor(omega), R3) == omega
        v = Multivector(R3, comps)
        assert parse_multivector(format_tensor(v), R3) == v


def test_zero_prints_and_parses():
    assert format_poly(PolyFunc.zero(R2)) == "0"
    assert parse_polyfunc("0", R2).is_zero
