"""Expression mini-language for literals in JSON inputs.

Monomials like ``3/2*x^2*y``, forms like ``x*dx^dy``, multivectors like
``h*Dx^Dy`` and mixed form/vector products like ``h*dt^Dx`` (used for
bigraded family components).  ``h`` is the deformation parameter, ``i`` the
imaginary unit, ``L`` the period unit (so ``2*L`` means twice 2*pi*sqrt(-1)),
``dx`` / ``Dx`` the coordinate one-form / vector basis, and ``^`` is the
wedge on basis elements or the integer power on scalars.

The parser round-trips the canonical printer.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, List, Tuple

from .charts import Chart
from .poly import PolyFunc
from .scalars import DEFAULT_ORDER, FormalSeries, Scalar

Key = Tuple[int, ...]


class ExprError(ValueError):
    """Malformed expression or one that does not fit the requested shape."""


class GradedValue:
    """Intermediate result of expression evaluation.

    A sum of terms (form_key, vector_key) -> PolyFunc on one chart; pure
    scalars sit at ((), ()), forms at (J, ()), multivectors at ((), K).
    """

    __slots__ = ("chart", "parts")

    def __init__(self, chart: Chart, parts: Dict[Tuple[Key, Key], PolyFunc] = None):
        clean = {}
        for key, p in (parts or {}).items():
            if not p.is_zero:
                clean[key] = clean[key] + p if key in clean else p
        self.chart = chart
        self.parts = {k: p for k, p in clean.items() if not p.is_zero}

    @staticmethod
    def scalar(chart: Chart, p: PolyFunc) -> "GradedValue":
        return GradedValue(chart, {((), ()): p})

    def is_scalar(self) -> bool:
        return all(k == ((), ()) for k in self.parts)

    def __add__(self, other: "GradedValue") -> "GradedValue":
        out = dict(self.parts)
        for k, p in other.parts.items():
            out[k] = out[k] + p if k in out else p
        return GradedValue(self.chart, out)

    def __neg__(self) -> "GradedValue":
        return GradedValue(self.chart, {k: -p for k, p in self.parts.items()})

    def __mul__(self, other: "GradedValue") -> "GradedValue":
        from .tensors import merge_indices

        out: Dict[Tuple[Key, Key], PolyFunc] = {}
        for (j1, k1), p1 in self.parts.items():
            for (j2, k2), p2 in other.parts.items():
                mj = merge_indices(j1, j2)
                mk = merge_indices(k1, k2)
                if mj is None or mk is None:
                    continue
                sj, J = mj
                sk, K = mk
                sign = sj * sk * ((-1) ** (len(k1) * len(j2)))
                t = p1 * p2 * sign
                key = (J, K)
                out[key] = out[key] + t if key in out else t
        return GradedValue(self.chart, out)

    # -- converters -----------------------------------------------------

    def to_polyfunc(self) -> PolyFunc:
        if not self.is_scalar():
            raise ExprError("expected a scalar function expression")
        return self.parts.get(((), ()), PolyFunc.zero(self.chart))

    def to_diff_form(self):
        from .tensors import DiffForm

        comps = {}
        for (J, K), p in self.parts.items():
            if K:
                raise ExprError("expected a differential form, found vector factors")
            comps[J] = p
        return DiffForm(self.chart, comps)

    def to_multivector(self):
        from .tensors import Multivector

        comps = {}
        for (J, K), p in self.parts.items():
            if J:
                raise ExprError("expected a multivector, found form factors")
            comps[K] = p
        return Multivector(self.chart, comps)

    def to_pairs(self) -> Dict[Tuple[Key, Key], PolyFunc]:
        return dict(self.parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([+\-*/^()]))")


def _tokenize(text: str) -> List[Tuple[str, str]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ExprError(f"cannot tokenize {rest[:16]!r}")
        num, ident, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif ident is not None:
            out.append(("ident", ident))
        else:
            out.append(("op", op))
        pos = m.end()
    out.append(("end", ""))
    return out


class _Parser:
    def __init__(self, text: str, chart: Chart, order: int):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.chart = chart
        self.order = order
        for n in chart.names:
            for prefix in ("d", "D"):
                if n.startswith(prefix) and n[1:] in chart.names:
                    raise ExprError(
                        f"coordinate name {n!r} is ambiguous with basis tokens")

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ExprError(f"expected {op!r}")

    def parse(self) -> GradedValue:
        v = self.expr()
        if self.peek()[0] != "end":
            raise ExprError(f"unexpected trailing input near {self.peek()[1]!r}")
        return v

    def expr(self) -> GradedValue:
        kind, val = self.peek()
        negate = False
        if kind == "op" and val in "+-":
            self.take()
            negate = val == "-"
        v = self.term()
        if negate:
            v = -v
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                v = v + (-rhs if val == "-" else rhs)
            else:
                return v

    def term(self) -> GradedValue:
        v = self.power()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.power()
                if val == "/":
                    rhs = self._invert(rhs)
                v = v * rhs
            else:
                return v

    def _invert(self, v: GradedValue) -> GradedValue:
        p = v.to_polyfunc()
        if not p.is_constant():
            raise ExprError("division only by constants")
        c = p.constant_term()
        return GradedValue.scalar(
            self.chart, PolyFunc.constant(self.chart, c.inverse(), self.order))

    def power(self) -> GradedValue:
        v = self.atom()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "^":
                self.take()
                rhs = self.atom()
                v = self._pow_or_wedge(v, rhs)
            else:
                return v

    def _pow_or_wedge(self, lhs: GradedValue, rhs: GradedValue) -> GradedValue:
        if lhs.is_scalar() and rhs.is_scalar():
            p = rhs.to_polyfunc()
            if not p.is_constant():
                raise ExprError("exponent must be a constant integer")
            c = p.constant_term()
            k = c.coeff(0)
            if any(c.coeff(j) for j in range(1, c.order + 1)) or not k.is_rational \
                    or k.re.denominator != 1 or k.re < 0:
                raise ExprError("exponent must be a non-negative integer")
            return GradedValue.scalar(self.chart, lhs.to_polyfunc() ** int(k.re))
        if lhs.is_scalar() or rhs.is_scalar():
            raise ExprError("wedge needs two form/vector factors")
        return lhs * rhs

    def atom(self) -> GradedValue:
        kind, val = self.take()
        if kind == "num":
            return GradedValue.scalar(
                self.chart,
                PolyFunc.constant(self.chart, Fraction(int(val)), self.order))
        if kind == "op" and val == "(":
            v = self.expr()
            self.expect_op(")")
            return v
        if kind == "op" and val == "-":
            return -self.atom()
        if kind == "ident":
            return self.ident_value(val)
        raise ExprError(f"unexpected token {val!r}")

    def ident_value(self, name: str) -> GradedValue:
        chart, order = self.chart, self.order
        if name in chart.names:
            return GradedValue.scalar(chart, PolyFunc.coordinate(chart, name, order))
        if name == "h":
            return GradedValue.scalar(
                chart, PolyFunc.constant(chart, FormalSeries.hbar(1, order)))
        if name == "i":
            return GradedValue.scalar(chart, PolyFunc.constant(chart, Scalar.i(), order))
        if name == "L":
            return GradedValue.scalar(
                chart, PolyFunc.constant(chart, Scalar.period(), order))
        if len(name) > 1 and name[0] == "d" and name[1:] in chart.names:
            axis = chart.axis(name[1:])
            return GradedValue(chart, {(((axis,), ())):
                                       PolyFunc.constant(chart, 1, order)})
        if len(name) > 1 and name[0] == "D" and name[1:] in chart.names:
            axis = chart.axis(name[1:])
            return GradedValue(chart, {(((), (axis,))):
                                       PolyFunc.constant(chart, 1, order)})
        raise ExprError(f"unknown identifier {name!r} on chart {chart}")


def parse_value(text: str, chart: Chart, order: int = DEFAULT_ORDER) -> GradedValue:
    return _Parser(text, chart, order).parse()


def parse_polyfunc(text: str, chart: Chart, order: int = DEFAULT_ORDER) -> PolyFunc:
    return parse_value(text, chart, order).to_polyfunc()


def parse_diff_form(text: str, chart: Chart, order: int = DEFAULT_ORDER):
    return parse_value(text, chart, order).to_diff_form()


def parse_multivector(text: str, chart: Chart, order: int = DEFAULT_ORDER):
    return parse_value(text, chart, order).to_multivector()


# -- canonical printer -------------------------------------------------------


def _flat_terms(chart: Chart, parts: Dict[Tuple[Key, Key], PolyFunc]):
    """Expand into (sortkey, Fraction, unit, hpow, mono, J, K) atoms."""
    units = ((0, ""), (1, "i"), (2, "L"), (3, "i*L"))
    out = []
    for (J, K), p in sorted(parts.items()):
        for mono in sorted(p.terms, key=lambda m: (sum(m), m)):
            series = p.terms[mono]
            for hpow in range(series.order + 1):
                s = series.coeff(hpow)
                for comp_idx, unit in units:
                    f = s.components()[comp_idx]
                    if f:
                        out.append(((J, K, sum(mono), mono, hpow, comp_idx),
                                    f, unit, hpow, mono, J, K))
    return out


def _term_string(chart: Chart, f: Fraction, unit: str, hpow: int, mono, J, K) -> str:
    factors = []
    af = abs(f)
    if af != 1:
        factors.append(str(af))
    if unit:
        factors.append(unit)
    if hpow == 1:
        factors.append("h")
    elif hpow > 1:
        factors.append(f"h^{hpow}")
    for axis, e in enumerate(mono):
        if e == 1:
            factors.append(chart.names[axis])
        elif e > 1:
            factors.append(f"{chart.names[axis]}^{e}")
    basis = [f"d{chart.names[a]}" for a in J] + [f"D{chart.names[a]}" for a in K]
    if basis:
        factors.append("^".join(basis))
    if not factors:
        factors.append("1")
    return "*".join(factors)


def format_parts(chart: Chart, parts: Dict[Tuple[Key, Key], PolyFunc]) -> str:
    terms = _flat_terms(chart, parts)
    if not terms:
        return "0"
    pieces = []
    for idx, (_, f, unit, hpow, mono, J, K) in enumerate(terms):
        s = _term_string(chart, f, unit, hpow, mono, J, K)
        if idx == 0:
            pieces.append(("-" if f < 0 else "") + s)
        else:
            pieces.append(("- " if f < 0 else "+ ") + s)
    return " ".join(pieces)


def format_poly(p: PolyFunc) -> str:
    return format_parts(p.chart, {((), ()): p})


def format_tensor(t) -> str:
    from .tensors import DiffForm

    if isinstance(t, DiffForm):
        parts = {(key, ()): p for key, p in t.comps.items()}
    else:
        parts = {((), key): p for key, p in t.comps.items()}
    return format_parts(t.chart, parts)
