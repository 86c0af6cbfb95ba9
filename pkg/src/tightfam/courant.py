"""The standard split Courant structure on TM + T*M with a closed 3-form
twist: pairing, bracket, gauge action, Dirac and twisted-Poisson checks.

Only the bracket form of the structure is implemented; the equivalent
packaging through a map from sections to vector fields on the total space
is noted here and not materialized.

Sign conventions (inherited from tightfam.algebra.tensors): the bracket's
twist term is +phi(X1, X2, .) and tau_beta adds +beta(X, .) to the form
part.  With these choices tau_beta intertwines the (phi + d beta)-bracket
with the phi-bracket, i.e. the gauge map that ADDS d beta to the twist is
tau_{-beta}; :func:`gauge_transform_bivector` uses the twist-adding
direction, so its output is (phi + d beta)-twisted Poisson whenever the
input is phi-twisted Poisson.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from . import polymat
from .algebra.charts import Chart, require_same_chart
from .algebra.poly import PolyFunc
from .algebra.scalars import FormalSeries, Scalar
from .algebra.tensors import (
    DiffForm,
    Multivector,
    de_rham_d,
    interior,
    lie_derivative_form,
    pairing_form_multivector,
    pi_sharp,
    schouten_bracket,
    wedge3_contraction,
)
from .report import Report


class GaugeError(ValueError):
    """Raised when a gauge transform cannot be inverted at order zero."""


class GenSection:
    """A section (X, xi) of TM + T*M on one chart."""

    __slots__ = ("chart", "X", "xi")

    def __init__(self, X: Multivector, xi: DiffForm):
        require_same_chart(X, xi)
        if X.grades() not in ((), (1,)):
            raise ValueError("vector part must have grade 1")
        if xi.grades() not in ((), (1,)):
            raise ValueError("form part must have degree 1")
        object.__setattr__(self, "chart", X.chart)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "xi", xi)

    def __setattr__(self, name, value):
        raise AttributeError("GenSection is immutable")

    @staticmethod
    def zero(chart: Chart) -> "GenSection":
        return GenSection(Multivector.zero(chart), DiffForm.zero(chart))

    def __add__(self, other: "GenSection") -> "GenSection":
        return GenSection(self.X + other.X, self.xi + other.xi)

    def __sub__(self, other: "GenSection") -> "GenSection":
        return GenSection(self.X - other.X, self.xi - other.xi)

    def __neg__(self):
        return GenSection(-self.X, -self.xi)

    def scale(self, f) -> "GenSection":
        """Module structure over functions: f.(X, xi) = (f X, f xi)."""
        return GenSection(self.X * f, self.xi * f)

    @property
    def is_zero(self) -> bool:
        return self.X.is_zero and self.xi.is_zero

    def anchor(self) -> Multivector:
        return self.X

    def __eq__(self, other):
        return isinstance(other, GenSection) and self.X == other.X \
            and self.xi == other.xi

    __hash__ = None

    def __repr__(self):
        return f"GenSection(X={self.X}, xi={self.xi})"


class TwistData:
    """A closed 3-form twist; closedness is verified on construction."""

    __slots__ = ("chart", "phi")

    def __init__(self, phi: DiffForm):
        if phi.grades() not in ((), (3,)):
            raise ValueError("twist must be a 3-form")
        dphi = de_rham_d(phi)
        if not dphi.is_zero:
            raise ValueError(f"twist is not closed: d(phi) = {dphi}")
        object.__setattr__(self, "chart", phi.chart)
        object.__setattr__(self, "phi", phi)

    def __setattr__(self, name, value):
        raise AttributeError("TwistData is immutable")

    @staticmethod
    def zero(chart: Chart) -> "TwistData":
        return TwistData(DiffForm.zero(chart))

    def __repr__(self):
        return f"TwistData({self.phi})"


def pairing(e1: GenSection, e2: GenSection) -> PolyFunc:
    """((X1, xi1), (X2, xi2)) = xi1(X2) + xi2(X1)."""
    require_same_chart(e1, e2)
    return pairing_form_multivector(e1.xi, e2.X) + \
        pairing_form_multivector(e2.xi, e1.X)


def twisted_bracket(e1: GenSection, e2: GenSection, tw: TwistData) -> GenSection:
    """[(X1,xi1),(X2,xi2)] = ([X1,X2], L_X1 xi2 - i_X2 d xi1 + phi(X1,X2,.))."""
    require_same_chart(e1, e2)
    if e1.chart != tw.chart:
        raise ValueError("twist lives on a different chart")
    X = schouten_bracket(e1.X, e2.X)
    xi = lie_derivative_form(e1.X, e2.xi) - interior(e2.X, de_rham_d(e1.xi)) \
        + interior(e2.X, interior(e1.X, tw.phi))
    return GenSection(X, xi)


def tau_beta(e: GenSection, beta: DiffForm) -> GenSection:
    """The 2-form gauge action tau_beta(X, xi) = (X, xi + beta(X, .))."""
    require_same_chart(e.X, beta)
    if beta.grades() not in ((), (2,)):
        raise ValueError("gauge parameter must be a 2-form")
    return GenSection(e.X, e.xi + interior(e.X, beta))


# -- Dirac structures ---------------------------------------------------------


class DiracSpec:
    """A candidate Dirac structure: a generator frame or the graph of a
    bivector."""

    __slots__ = ("chart", "generators", "graph_of")

    def __init__(self, chart: Chart, generators: Optional[List[GenSection]] = None,
                 graph_of: Optional[Multivector] = None):
        if (generators is None) == (graph_of is None):
            raise ValueError("give either generators or graph_of")
        if graph_of is not None and graph_of.grades() not in ((), (2,)):
            raise ValueError("graph_of must be a bivector")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "graph_of", graph_of)

    def __setattr__(self, name, value):
        raise AttributeError("DiracSpec is immutable")

    @staticmethod
    def graph(pi: Multivector) -> "DiracSpec":
        return DiracSpec(pi.chart, graph_of=pi)

    @staticmethod
    def tangent(chart: Chart) -> "DiracSpec":
        gens = [GenSection(Multivector.basis(chart, n), DiffForm.zero(chart))
                for n in chart.names]
        return DiracSpec(chart, generators=gens)

    @staticmethod
    def cotangent(chart: Chart) -> "DiracSpec":
        gens = [GenSection(Multivector.zero(chart), DiffForm.basis(chart, n))
                for n in chart.names]
        return DiracSpec(chart, generators=gens)

    def frame(self) -> List[GenSection]:
        if self.generators is not None:
            return list(self.generators)
        pi = self.graph_of
        chart = self.chart
        return [GenSection(pi_sharp(pi, DiffForm.basis(chart, n)),
                           DiffForm.basis(chart, n))
                for n in chart.names]


def _component_rows(gens: Sequence[GenSection]):
    """The 2n x n matrix of generator components (vector rows, then form)."""
    chart = gens[0].chart
    n = chart.dim
    rows = []
    for i in range(n):
        rows.append([g.X.component((i,)) for g in gens])
    for i in range(n):
        rows.append([g.xi.component((i,)) for g in gens])
    return rows


def _independent_at_base(gens: Sequence[GenSection]) -> bool:
    from fractions import Fraction

    from .linsolve import solve_fractions

    chart = gens[0].chart
    base = chart.center()
    cols = []
    for g in gens:
        col = []
        for i in range(chart.dim):
            col.append(g.X.component((i,)).evaluate(base))
        for i in range(chart.dim):
            col.append(g.xi.component((i,)).evaluate(base))
        cols.append(col)
    # rank over Q of the flattened (component x h-order x scalar-part) matrix
    order = max(s.order for col in cols for s in col)
    rows = []
    for r in range(len(cols[0])):
        for k in range(order + 1):
            for comp in range(4):
                rows.append([col[r].coeff(k).components()[comp] for col in cols])
    # rank = number of pivots found by elimination
    m = [list(map(Fraction, row)) for row in rows]
    rank = 0
    r = 0
    for c in range(len(cols)):
        piv = next((j for j in range(r, len(m)) if m[j][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        for j in range(len(m)):
            if j != r and m[j][c]:
                f = m[j][c] / pv
                m[j] = [x - f * y for x, y in zip(m[j], m[r])]
        rank += 1
        r += 1
    return rank == len(cols)


def _expand_in_frame(gens: Sequence[GenSection], target: GenSection):
    """Write target = sum_k c_k gen_k with PolyFunc coefficients, or return
    None when no such expansion exists.

    Solves through an invertible constant sub-frame (rows of the component
    matrix forming a constant invertible matrix), then verifies the remaining
    component identities exactly.
    """
    chart = gens[0].chart
    n = len(gens)
    rows = _component_rows(gens)
    rhs = [target.X.component((i,)) for i in range(chart.dim)] + \
          [target.xi.component((i,)) for i in range(chart.dim)]

    chosen: List[int] = []
    sub: List[List[PolyFunc]] = []
    for ridx, row in enumerate(rows):
        if len(chosen) == n:
            break
        if not all(p.is_constant() for p in row):
            continue
        trial = sub + [row]
        try:
            polymat.invert_constant(_pad_square(trial, chart, n))
        except ValueError:
            continue
        chosen.append(ridx)
        sub = trial
    if len(chosen) < n:
        raise ValueError("no constant invertible sub-frame; closure check "
                         "needs a framed generator set")
    inv = polymat.invert_constant(sub)
    coeffs = [PolyFunc.zero(chart) for _ in range(n)]
    for k in range(n):
        for j, ridx in enumerate(chosen):
            coeffs[k] = coeffs[k] + inv[k][j] * rhs[ridx]
    # verify every component identity
    for ridx, row in enumerate(rows):
        acc = PolyFunc.zero(chart)
        for k in range(n):
            acc = acc + row[k] * coeffs[k]
        if acc != rhs[ridx]:
            return None
    return coeffs


def _pad_square(rows, chart, n):
    """Pad a rectangular row list to square with unit rows so partial frames
    can be tested for invertibility."""
    out = [list(r) for r in rows]
    k = len(out)
    for extra in range(n - k):
        row = [PolyFunc.zero(chart) for _ in range(n)]
        # fill with a unit on some column not pivoted yet; invert_constant
        # fails iff the chosen rows are dependent, which is all we test
        row[(k + extra) % n] = PolyFunc.constant(chart, 1)
        out.append(row)
    if n - k > 0:
        # padding may collide with existing pivots; try all shifts
        for shift in range(n):
            trial = [list(r) for r in rows]
            used = set()
            ok = True
            for extra in range(n - k):
                col = (shift + extra) % n
                while col in used:
                    col = (col + 1) % n
                used.add(col)
                row = [PolyFunc.zero(chart) for _ in range(n)]
                row[col] = PolyFunc.constant(chart, 1)
                trial.append(row)
            try:
                polymat.invert_constant(trial)
                return trial
            except ValueError:
                continue
        raise ValueError("dependent rows")
    return out


def check_dirac(spec: DiracSpec, tw: TwistData) -> Report:
    """Isotropy and bracket-closure of a generator frame, exactly.

    Closure expands each bracket of generators in the frame over polynomial
    coefficients; failures carry the witness bracket.
    """
    rep = Report("dirac")
    gens = spec.frame()
    if not _independent_at_base(gens):
        rep.add("independence", False,
                witness="generators are dependent at the chart base point")
        return rep
    rep.add("independence", True)
    ok = True
    for a in range(len(gens)):
        for b in range(a, len(gens)):
            p = pairing(gens[a], gens[b])
            if not p.is_zero:
                rep.add(f"isotropy[{a},{b}]", False, residual=str(p),
                        witness=f"pairing of generators {a},{b} is {p}")
                ok = False
    if ok:
        rep.add("isotropy", True)
    for a in range(len(gens)):
        for b in range(len(gens)):
            if a == b:
                continue
            br = twisted_bracket(gens[a], gens[b], tw)
            if br.is_zero:
                continue
            try:
                coeffs = _expand_in_frame(gens, br)
            except ValueError as exc:
                rep.add(f"closure[{a},{b}]", False, witness=str(exc))
                continue
            if coeffs is None:
                rep.add(f"closure[{a},{b}]", False,
                        residual=f"(X={br.X}, xi={br.xi})",
                        witness=f"bracket of generators {a},{b} leaves the "
                                f"span: (X={br.X}, xi={br.xi})")
    if not rep.failures():
        rep.add("closure", True)
    return rep


def twisted_poisson_residual(pi: Multivector, tw: TwistData) -> Multivector:
    """[pi, pi] - 2 (wedge^3 of the bivector map applied to the twist)."""
    require_same_chart(pi, tw.phi)
    return schouten_bracket(pi, pi) - 2 * wedge3_contraction(pi, tw.phi)


def check_twisted_poisson(pi: Multivector, tw: TwistData) -> Report:
    rep = Report("twisted-poisson")
    res = twisted_poisson_residual(pi, tw)
    rep.add("twisted-poisson", res.is_zero, residual=str(res),
            witness=None if res.is_zero else f"residual trivector {res}")
    return rep


# -- gauge action on bivectors ------------------------------------------------


def _sharp_matrix(pi: Multivector) -> polymat.Mat:
    """Column j = components of pi(dx_j, .)."""
    chart = pi.chart
    n = chart.dim
    out = polymat.zeros(chart, n, n)
    for j, name in enumerate(chart.names):
        v = pi_sharp(pi, DiffForm.basis(chart, name))
        for i in range(n):
            out[i][j] = v.component((i,))
    return out


def _flat_matrix(beta: DiffForm) -> polymat.Mat:
    """Column j = components of beta(Dx_j, .)."""
    chart = beta.chart
    n = chart.dim
    out = polymat.zeros(chart, n, n)
    for j, name in enumerate(chart.names):
        f = interior(Multivector.basis(chart, name), beta)
        for i in range(n):
            out[i][j] = f.component((i,))
    return out


def _bivector_from_sharp(m: polymat.Mat, chart: Chart) -> Multivector:
    n = chart.dim
    comps = {}
    for a in range(n):
        for b in range(a + 1, n):
            # component of pi(dx_a, .) along Dx_b
            comps[(a, b)] = m[b][a]
    out = Multivector(chart, comps)
    # antisymmetry consistency of the computed sharp map
    for a in range(n):
        if not m[a][a].is_zero:
            raise ValueError("sharp matrix is not antisymmetric")
        for b in range(a + 1, n):
            if m[b][a] != -m[a][b]:
                raise ValueError("sharp matrix is not antisymmetric")
    return out


def gauge_transform_bivector(pi: Multivector, beta: DiffForm) -> Multivector:
    """The bivector whose graph is the twist-adding gauge image of graph(pi):
    the output is (phi + d beta)-twisted Poisson when pi is phi-twisted.

    Internally this is the graph of tau_{-beta}: xi' = xi - flat(beta)
    sharp(pi) xi, re-solved by the Neumann series sharp(pi') =
    sharp(pi) sum_k (flat(beta) sharp(pi))^k, which terminates within the
    truncation order because pi = O(h).
    """
    require_same_chart(pi, beta)
    if not pi.is_order_h:
        raise GaugeError("bivector must be O(h) for the order-by-order "
                         "graph re-solve")
    chart = pi.chart
    order = max((c.order for p in pi.comps.values() for c in p.terms.values()),
                default=2)
    P = _sharp_matrix(pi)
    B = _flat_matrix(beta)
    M = polymat.mul(B, P)  # xi -> beta_flat(pi_sharp(xi)), O(h)
    acc = polymat.eye(chart, chart.dim)
    term = polymat.eye(chart, chart.dim)
    for _ in range(order):
        term = polymat.mul(M, term)
        acc = polymat.add(acc, term)
    return _bivector_from_sharp(polymat.mul(P, acc), chart)
