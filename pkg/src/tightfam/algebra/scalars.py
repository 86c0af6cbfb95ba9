"""Exact scalars and truncated formal power series.

The scalar ring is Q(i) extended by a formal period unit L standing for
2*pi*sqrt(-1).  L is never multiplied with itself: period parts only ever
appear additively inside exponents, where the rule exp(n*L) = 1 for integer
n makes period bookkeeping exact.  Attempting L*L raises
:class:`PeriodProductError` instead of silently losing exactness.

Formal series are truncated at a finite order N; combining two series takes
the minimum of their truncation orders, and all arithmetic is performed
modulo h^(N+1).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

DEFAULT_ORDER = 2
MAX_ORDER = 4

RationalLike = Union[int, Fraction]


class PeriodProductError(ArithmeticError):
    """Raised when a computation would need the square of the period unit."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class Scalar:
    """An exact complex rational plus a complex-rational multiple of L.

    Value represented: ``re + im*i + (lre + lim*i)*L`` with all four parts
    exact fractions.
    """

    __slots__ = ("re", "im", "lre", "lim")

    def __init__(self, re=0, im=0, lre=0, lim=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))
        object.__setattr__(self, "lre", _frac(lre))
        object.__setattr__(self, "lim", _frac(lim))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    @staticmethod
    def zero() -> "Scalar":
        return _ZERO

    @staticmethod
    def one() -> "Scalar":
        return _ONE

    @staticmethod
    def i() -> "Scalar":
        return Scalar(0, 1)

    @staticmethod
    def period(mult=1) -> "Scalar":
        """mult * L, i.e. mult * 2*pi*sqrt(-1)."""
        m = Scalar.coerce(mult)
        if m.has_period:
            raise PeriodProductError("period multiple must be period-free")
        return Scalar(0, 0, m.re, m.im)

    # -- predicates ----------------------------------------------------

    @property
    def has_period(self) -> bool:
        return bool(self.lre) or bool(self.lim)

    @property
    def is_zero(self) -> bool:
        return not (self.re or self.im or self.lre or self.lim)

    @property
    def is_rational(self) -> bool:
        return not (self.im or self.lre or self.lim)

    def rational_part(self) -> "Scalar":
        return Scalar(self.re, self.im)

    def period_part(self) -> "Scalar":
        """The coefficient of L, as a period-free Scalar."""
        return Scalar(self.lre, self.lim)

    def exp_is_one(self) -> bool:
        """True iff exponentiating this scalar gives exactly 1.

        Holds when the value is an integer multiple of L (the periods rule)
        and the rational part vanishes.
        """
        return (
            not self.re
            and not self.im
            and not self.lim
            and self.lre.denominator == 1
        )

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        o = Scalar.coerce(other)
        return Scalar(self.re + o.re, self.im + o.im, self.lre + o.lre, self.lim + o.lim)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im, -self.lre, -self.lim)

    def __sub__(self, other):
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other):
        return Scalar.coerce(other) + (-self)

    def __mul__(self, other):
        o = Scalar.coerce(other)
        if self.has_period and o.has_period:
            raise PeriodProductError("product of two period-carrying scalars (L*L)")
        # (a + b*L)(c + d*L) with b*d = 0: rational parts multiply as complex
        # numbers, the period coefficient scales complex-linearly.
        re = self.re * o.re - self.im * o.im
        im = self.re * o.im + self.im * o.re
        lre = self.re * o.lre - self.im * o.lim + self.lre * o.re - self.lim * o.im
        lim = self.re * o.lim + self.im * o.lre + self.lre * o.im + self.lim * o.re
        return Scalar(re, im, lre, lim)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.has_period:
            raise PeriodProductError("cannot invert a period-carrying scalar")
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("scalar is zero")
        return Scalar(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * Scalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    # -- comparison / hashing / display --------------------------------

    def __eq__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return (self.re, self.im, self.lre, self.lim) == (o.re, o.im, o.lre, o.lim)

    def __hash__(self):
        return hash((self.re, self.im, self.lre, self.lim))

    def __bool__(self):
        return not self.is_zero

    def components(self) -> tuple:
        return (self.re, self.im, self.lre, self.lim)

    def __str__(self):
        parts = []
        if self.re:
            parts.append(_frac_str(self.re))
        if self.im:
            parts.append(_unit_str(self.im, "i"))
        if self.lre:
            parts.append(_unit_str(self.lre, "L"))
        if self.lim:
            parts.append(_unit_str(self.lim, "i*L"))
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return f"Scalar({self})"


def _frac_str(f: Fraction) -> str:
    return str(f)


def _unit_str(coeff: Fraction, unit: str) -> str:
    if coeff == 1:
        return unit
    if coeff == -1:
        return "-" + unit
    return f"{coeff}*{unit}"


_ZERO = Scalar()
_ONE = Scalar(1)


class FormalSeries:
    """Truncated power series in h over a coefficient space.

    Coefficients live in any space supporting +, -, * by ring elements and
    zero-testing; the primary instance is :class:`Scalar`.  A series carries
    its own truncation order N and all arithmetic is modulo h^(N+1);
    combining two series takes the minimum order.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable, order: int = DEFAULT_ORDER):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        cs = [Scalar.coerce(c) if isinstance(c, (int, Fraction)) else c for c in coeffs]
        cs = cs[: order + 1]
        while len(cs) < order + 1:
            cs.append(Scalar.zero())
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("FormalSeries is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def coerce(x, order: int = DEFAULT_ORDER) -> "FormalSeries":
        if isinstance(x, FormalSeries):
            return x
        if isinstance(x, (int, Fraction, Scalar)):
            return FormalSeries.constant(Scalar.coerce(x), order)
        raise TypeError(f"cannot coerce {type(x).__name__} to FormalSeries")

    @staticmethod
    def constant(value, order: int = DEFAULT_ORDER) -> "FormalSeries":
        return FormalSeries([value], order)

    @staticmethod
    def zero(order: int = DEFAULT_ORDER) -> "FormalSeries":
        return FormalSeries([], order)

    @staticmethod
    def one(order: int = DEFAULT_ORDER) -> "FormalSeries":
        return FormalSeries([Scalar.one()], order)

    @staticmethod
    def hbar(power: int = 1, order: int = DEFAULT_ORDER) -> "FormalSeries":
        cs = [Scalar.zero()] * power + [Scalar.one()]
        return FormalSeries(cs, order)

    # -- structure -------------------------------------------------------

    def coeff(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Scalar.zero()

    @property
    def is_zero(self) -> bool:
        return all(not c for c in self.coeffs)

    @property
    def is_order_h(self) -> bool:
        """True iff the series is O(h), i.e. coefficient 0 vanishes."""
        return not self.coeffs[0]

    def truncate(self, order: int) -> "FormalSeries":
        return FormalSeries(self.coeffs[: order + 1], min(order, self.order))

    def shift(self, k: int) -> "FormalSeries":
        """Multiply by h^k."""
        return FormalSeries((Scalar.zero(),) * k + self.coeffs, self.order)

    # -- ring operations --------------------------------------------------

    def _common(self, other) -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        o = FormalSeries.coerce(other, self.order)
        n = self._common(o)
        return FormalSeries([self.coeff(k) + o.coeff(k) for k in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return FormalSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-FormalSeries.coerce(other, self.order))

    def __rsub__(self, other):
        return FormalSeries.coerce(other, self.order) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            s = Scalar.coerce(other)
            return FormalSeries([c * s for c in self.coeffs], self.order)
        o = FormalSeries.coerce(other, self.order)
        n = self._common(o)
        out = [Scalar.zero() for _ in range(n + 1)]
        for a, ca in enumerate(self.coeffs[: n + 1]):
            if not ca:
                continue
            for b in range(n + 1 - a):
                cb = o.coeff(b)
                if cb:
                    out[a + b] = out[a + b] + ca * cb
        return FormalSeries(out, n)

    __rmul__ = __mul__

    def inverse(self) -> "FormalSeries":
        """Multiplicative inverse; requires an invertible constant term."""
        c0 = self.coeffs[0]
        inv0 = c0.inverse()
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = Scalar.zero()
            for j in range(k):
                acc = acc + out[j] * self.coeff(k - j)
            out.append(-(inv0 * acc))
        return FormalSeries(out, self.order)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self * Scalar.coerce(other).inverse()
        return self * FormalSeries.coerce(other, self.order).inverse()

    def exp_tail(self) -> "FormalSeries":
        """exp of a series with no constant term, expanded and truncated."""
        if self.coeffs[0]:
            raise ValueError("exp_tail requires a series that is O(h)")
        out = FormalSeries.one(self.order)
        term = FormalSeries.one(self.order)
        for k in range(1, self.order + 1):
            term = term * self * Fraction(1, k)
            out = out + term
        return out

    # -- comparison / display ---------------------------------------------

    def __eq__(self, other):
        try:
            o = FormalSeries.coerce(other, self.order)
        except TypeError:
            return NotImplemented
        n = self._common(o)
        return all(self.coeff(k) == o.coeff(k) for k in range(n + 1))

    __hash__ = None

    def __bool__(self):
        return not self.is_zero

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            cs = str(c)
            if k == 0:
                parts.append(cs)
            else:
                hk = "h" if k == 1 else f"h^{k}"
                parts.append(hk if cs == "1" else f"({cs})*{hk}" if ("+" in cs or cs.startswith("-")) else f"{cs}*{hk}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FormalSeries({self}, order={self.order})"
