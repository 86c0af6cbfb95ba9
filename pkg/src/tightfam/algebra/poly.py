"""Polynomial functions on a chart with truncated-series coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Sequence, Tuple

from .charts import Chart, as_point, require_same_chart
from .scalars import DEFAULT_ORDER, FormalSeries, Scalar

Monomial = Tuple[int, ...]


def _coerce_coeff(c, order: int) -> FormalSeries:
    return FormalSeries.coerce(c, order)


class PolyFunc:
    """A polynomial in the chart coordinates over FormalSeries scalars.

    Stored as a map from exponent vectors to nonzero series coefficients;
    the zero polynomial has empty support.
    """

    __slots__ = ("chart", "terms")

    def __init__(self, chart: Chart, terms: Dict[Monomial, FormalSeries] = None,
                 order: int = DEFAULT_ORDER):
        clean: Dict[Monomial, FormalSeries] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != chart.dim or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono} for {chart}")
            cs = _coerce_coeff(c, order)
            if not cs.is_zero:
                clean[mono] = clean[mono] + cs if mono in clean else cs
        clean = {m: c for m, c in clean.items() if not c.is_zero}
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("PolyFunc is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(chart: Chart) -> "PolyFunc":
        return PolyFunc(chart, {})

    @staticmethod
    def constant(chart: Chart, value, order: int = DEFAULT_ORDER) -> "PolyFunc":
        return PolyFunc(chart, {(0,) * chart.dim: _coerce_coeff(value, order)})

    @staticmethod
    def coordinate(chart: Chart, name: str, order: int = DEFAULT_ORDER) -> "PolyFunc":
        e = [0] * chart.dim
        e[chart.axis(name)] = 1
        return PolyFunc(chart, {tuple(e): FormalSeries.one(order)})

    @staticmethod
    def coerce(x, chart: Chart, order: int = DEFAULT_ORDER) -> "PolyFunc":
        if isinstance(x, PolyFunc):
            require_same_chart_poly(x, chart)
            return x
        return PolyFunc.constant(chart, x, order)

    # -- structure --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_order_h(self) -> bool:
        return all(c.is_order_h for c in self.terms.values())

    def h_coefficient(self, k: int) -> "PolyFunc":
        """The polynomial multiplying h^k, with plain order-0 coefficients."""
        out = {}
        for m, c in self.terms.items():
            ck = c.coeff(k)
            if ck:
                out[m] = FormalSeries.constant(ck, 0)
            # order 0 keeps just the scalar
        return PolyFunc(self.chart, out, order=0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def constant_term(self) -> FormalSeries:
        return self.terms.get((0,) * self.chart.dim, FormalSeries.zero())

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    # -- arithmetic ---------------------------------------------------------

    def _coerce_other(self, other) -> "PolyFunc":
        if isinstance(other, PolyFunc):
            require_same_chart(self, other)
            return other
        return PolyFunc.constant(self.chart, other)

    def __add__(self, other):
        o = self._coerce_other(other)
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out[m] + c if m in out else c
        return PolyFunc(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return PolyFunc(self.chart, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce_other(other))

    def __rsub__(self, other):
        return self._coerce_other(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar, FormalSeries)):
            return PolyFunc(self.chart, {m: c * other for m, c in self.terms.items()})
        o = self._coerce_other(other)
        out: Dict[Monomial, FormalSeries] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = c1 * c2
                out[m] = out[m] + c if m in out else c
        return PolyFunc(self.chart, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = PolyFunc.constant(self.chart, 1)
        for _ in range(k):
            out = out * self
        return out

    def diff(self, axis: int) -> "PolyFunc":
        out = {}
        for m, c in self.terms.items():
            e = m[axis]
            if e:
                mm = m[:axis] + (e - 1,) + m[axis + 1:]
                t = c * Fraction(e)
                out[mm] = out[mm] + t if mm in out else t
        return PolyFunc(self.chart, out)

    def evaluate(self, point: Sequence) -> FormalSeries:
        pt = as_point(point)
        if len(pt) != self.chart.dim:
            raise ValueError("point dimension mismatch")
        acc = FormalSeries.zero(min((c.order for c in self.terms.values()),
                                    default=DEFAULT_ORDER))
        for m, c in self.terms.items():
            v = Fraction(1)
            for e, x in zip(m, pt):
                v *= x ** e
            acc = acc + c * v
        return acc

    def substitute(self, chart: Chart, images: Sequence["PolyFunc"]) -> "PolyFunc":
        """Compose with x_i -> images[i], polynomials on ``chart``."""
        if len(images) != self.chart.dim:
            raise ValueError("one image polynomial per coordinate required")
        acc = PolyFunc.zero(chart)
        for m, c in self.terms.items():
            term = PolyFunc.constant(chart, c)
            for e, img in zip(m, images):
                if e:
                    term = term * img ** e
            acc = acc + term
        return acc

    def scale_h(self, k: int) -> "PolyFunc":
        """Multiply every coefficient by h^k."""
        return PolyFunc(self.chart, {m: c.shift(k) for m, c in self.terms.items()})

    # -- comparison / display ------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar, FormalSeries)):
            other = PolyFunc.constant(self.chart, other)
        if not isinstance(other, PolyFunc):
            return NotImplemented
        return self.chart == other.chart and (self - other).is_zero

    __hash__ = None

    def __bool__(self):
        return not self.is_zero

    def __str__(self):
        from .exprs import format_poly

        return format_poly(self)

    def __repr__(self):
        return f"PolyFunc({self})"


def require_same_chart_poly(p: PolyFunc, chart: Chart):
    if p.chart != chart:
        raise ValueError(f"polynomial lives on {p.chart}, expected {chart}")
