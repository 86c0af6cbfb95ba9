from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tightfam.algebra import FormalSeries, PeriodProductError, Scalar


def test_scalar_exact_arithmetic():
    a = Scalar(Fraction(1, 3), Fraction(2))
    b = Scalar(Fraction(1, 6), Fraction(-1, 2))
    assert a + b == Scalar(Fraction(1, 2), Fraction(3, 2))
    assert a - a == Scalar.zero()
    # (1/3 + 2i)(1/6 - i/2) = 1/18 + 1 + i(1/3 - 1/6) = 19/18 + i/6
    assert a * b == Scalar(Fraction(19, 18), Fraction(1, 6))
    assert (a * b) / b == a


def test_period_part_is_additive_only():
    lam = Scalar.period()
    assert (lam + lam) == Scalar.period(2)
    assert 3 * Scalar.period(Fraction(1, 2)) == Scalar.period(Fraction(3, 2))
    with pytest.raises(PeriodProductError):
        lam * lam
    with pytest.raises(PeriodProductError):
        (1 + lam) * (2 + lam)
    # scaling by a period-free scalar stays inside the ring
    assert Scalar(0, 1) * lam == Scalar(0, 0, 0, 1)


def test_integer_period_exponentiates_to_one():
    assert Scalar.period(3).exp_is_one()
    assert Scalar.period(-1).exp_is_one()
    assert Scalar.zero().exp_is_one()
    assert not Scalar.period(Fraction(1, 2)).exp_is_one()
    assert not (Scalar.one() + Scalar.period()).exp_is_one()
    assert not Scalar(0, 0, 0, 1).exp_is_one()


def test_scalar_division_guards():
    with pytest.raises(ZeroDivisionError):
        Scalar.one() / Scalar.zero()
    with pytest.raises(PeriodProductError):
        Scalar.one() / Scalar.period()


def test_series_basic_ring_ops():
    h = FormalSeries.hbar()
    one = FormalSeries.one()
    s = one + 2 * h + h * h * 3
    assert s.coeff(0) == Scalar.one()
    assert s.coeff(1) == Scalar(2)
    assert s.coeff(2) == Scalar(3)
    assert s.coeff(7) == Scalar.zero()
    assert (s - s).is_zero
    assert not s.is_order_h
    assert (s - one).is_order_h


def test_series_truncation_is_modulo_h():
    h = FormalSeries.hbar(order=2)
    assert ((h * h) * h).is_zero
    a = FormalSeries([1, 1, 1], order=2)
    b = FormalSeries([1, 2], order=1)
    # combining takes the minimum truncation order
    assert (a * b).order == 1
    assert a * b == FormalSeries([1, 3], order=1)


def test_series_inverse_and_exp_tail():
    h = FormalSeries.hbar(order=2)
    s = FormalSeries.one(2) + h
    assert s * s.inverse() == FormalSeries.one(2)
    assert s.inverse() == FormalSeries([1, -1, 1], order=2)
    e = h.exp_tail()
    assert e == FormalSeries([1, 1, Fraction(1, 2)], order=2)
    with pytest.raises(ValueError):
        (FormalSeries.one(2) + h).exp_tail()


scalars = st.builds(
    Scalar,
    st.fractions(max_denominator=6),
    st.fractions(max_denominator=6),
)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(scalars, min_size=1, max_size=5),
    st.lists(scalars, min_size=1, max_size=5),
)
def test_truncated_multiplication_is_a_ring_homomorphism(acs, bcs):
    # truncate(a) * truncate(b) == truncate(a * b) at every order
    a4 = FormalSeries(acs, order=4)
    b4 = FormalSeries(bcs, order=4)
    for n in range(5):
        lhs = a4.truncate(n) * b4.truncate(n)
        rhs = (a4 * b4).truncate(n)
        assert lhs == rhs
