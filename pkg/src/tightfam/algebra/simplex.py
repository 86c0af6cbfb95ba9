"""Affine simplices, exact integration of polynomial forms, and the
Poincare homotopy operator on star-shaped charts."""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import List, Sequence, Tuple

from .charts import Chart, as_point
from .poly import PolyFunc
from .scalars import FormalSeries, Scalar
from .tensors import DiffForm, merge_indices


class AffineSimplex:
    """An ordered list of k+1 affinely independent points in a chart.

    The orientation is the one implied by the vertex order.
    """

    __slots__ = ("chart", "vertices")

    def __init__(self, chart: Chart, vertices: Sequence[Sequence]):
        vs = tuple(as_point(v) for v in vertices)
        if not vs:
            raise ValueError("a simplex needs at least one vertex")
        for v in vs:
            if len(v) != chart.dim:
                raise ValueError("vertex dimension mismatch")
        k = len(vs) - 1
        if k > chart.dim:
            raise ValueError("simplex dimension exceeds chart dimension")
        if not _affinely_independent(vs):
            raise ValueError("vertices are not affinely independent")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "vertices", vs)

    def __setattr__(self, name, value):
        raise AttributeError("AffineSimplex is immutable")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def face(self, j: int) -> "AffineSimplex":
        """The j-th boundary face (vertex j omitted)."""
        vs = self.vertices[:j] + self.vertices[j + 1:]
        return AffineSimplex(self.chart, vs)

    def boundary(self) -> List[Tuple[int, "AffineSimplex"]]:
        """Oriented boundary as (sign, face) pairs."""
        return [((-1) ** j, self.face(j)) for j in range(self.dim + 1)]

    def __repr__(self):
        pts = "; ".join(",".join(str(c) for c in v) for v in self.vertices)
        return f"AffineSimplex({pts})"


def _affinely_independent(vs) -> bool:
    k = len(vs) - 1
    if k == 0:
        return True
    rows = [[vs[a][i] - vs[0][i] for i in range(len(vs[0]))] for a in range(1, k + 1)]
    # rank by Gaussian elimination over exact fractions
    rank = 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((j for j in range(r, len(rows)) if rows[j][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        for j in range(len(rows)):
            if j != r and rows[j][c]:
                f = rows[j][c] / pv
                rows[j] = [x - f * y for x, y in zip(rows[j], rows[r])]
        r += 1
        rank += 1
        if r == len(rows):
            break
    return rank == k


def _simplex_monomial_integral(expo: Sequence[int]) -> Fraction:
    """Integral of t^expo over the standard simplex {t_a >= 0, sum t <= 1}."""
    k = len(expo)
    num = 1
    for e in expo:
        num *= factorial(e)
    return Fraction(num, factorial(k + sum(expo)))


def integrate_over_simplex(omega: DiffForm, s: AffineSimplex) -> FormalSeries:
    """Exact integral of a polynomial k-form over a k-simplex.

    Pulls the form back along the affine parametrization of the standard
    simplex and integrates monomials with exact rational weights.
    Reversing two vertices flips the sign.
    """
    if omega.chart != s.chart:
        raise ValueError("form and simplex live on different charts")
    k = s.dim
    grades = omega.grades()
    if grades not in ((), (k,)):
        raise ValueError(f"degree {grades} form over a {k}-simplex")
    order = max((c.order for p in omega.comps.values() for c in p.terms.values()),
                default=2)
    if k == 0:
        f = omega.component(())
        return f.evaluate(s.vertices[0]) if not f.is_zero else FormalSeries.zero(order)

    tchart = Chart(tuple(f"_t{a}" for a in range(1, k + 1)))
    v0 = s.vertices[0]
    edges = [tuple(s.vertices[a][i] - v0[i] for i in range(s.chart.dim))
             for a in range(1, k + 1)]
    # coordinate images x_i(t) on the parameter chart
    images = []
    for i in range(s.chart.dim):
        terms = {}
        for a in range(k):
            if edges[a][i]:
                e = [0] * k
                e[a] = 1
                terms[tuple(e)] = FormalSeries.constant(Scalar(edges[a][i]), order)
        if v0[i]:
            terms[(0,) * k] = FormalSeries.constant(Scalar(v0[i]), order)
        images.append(PolyFunc(tchart, terms))
    # pullbacks of the coordinate one-forms
    dts = [DiffForm(tchart, {(a,): PolyFunc.constant(tchart, edges[a][i], order)
                             for a in range(k) if edges[a][i]})
           for i in range(s.chart.dim)]

    total = FormalSeries.zero(order)
    for key, p in omega.comps.items():
        pb = DiffForm(tchart, {(): p.substitute(tchart, images)})
        for i in key:
            pb = pb.wedge(dts[i])
        top = pb.component(tuple(range(k)))
        for mono, c in top.terms.items():
            total = total + c * _simplex_monomial_integral(mono)
    return total


def integrate_over_chain(omega: DiffForm, chain: Sequence[Tuple[int, AffineSimplex]]
                         ) -> FormalSeries:
    total = FormalSeries.zero(
        max((c.order for p in omega.comps.values() for c in p.terms.values()),
            default=2))
    for sign, s in chain:
        total = total + integrate_over_simplex(omega, s) * Fraction(sign)
    return total


def poincare_homotopy(omega: DiffForm, center: Sequence) -> DiffForm:
    """The radial homotopy operator K about ``center``.

    Satisfies d(K w) + K(d w) = w on forms of degree >= 1, on a chart whose
    domain is star-shaped about the center (true for any interior point of
    the box domains used here).
    """
    chart = omega.chart
    c = as_point(center)
    if len(c) != chart.dim:
        raise ValueError("center dimension mismatch")
    if not chart.contains(c):
        raise ValueError("chart domain is not star-shaped about the center")
    if omega.is_zero:
        return DiffForm.zero(chart)
    if 0 in omega.grades():
        raise ValueError("homotopy operator applies to forms of degree >= 1")

    # work in coordinates z = x - c: substitute x_i -> z_i + c_i
    shift_in = [PolyFunc.coordinate(chart, n) + Fraction(c[i])
                for i, n in enumerate(chart.names)]
    shift_out = [PolyFunc.coordinate(chart, n) - Fraction(c[i])
                 for i, n in enumerate(chart.names)]

    out = {}
    for key, p in omega.comps.items():
        k = len(key)
        pc = p.substitute(chart, shift_in)
        # radial weight: z^beta picks up 1/(k + |beta|)
        weighted = PolyFunc(chart, {m: coeff * Fraction(1, k + sum(m))
                                    for m, coeff in pc.terms.items()})
        for j, i in enumerate(key):
            zi = PolyFunc.coordinate(chart, chart.names[i])
            coeff = (weighted * zi * ((-1) ** j)).substitute(chart, shift_out)
            nk = key[:j] + key[j + 1:]
            if nk in out:
                out[nk] = out[nk] + coeff
            else:
                out[nk] = coeff
    return DiffForm(chart, out)
