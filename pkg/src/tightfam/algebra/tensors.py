"""Antisymmetric tensor fields on a chart: multivectors and differential forms.

Components are stored only on strictly increasing index tuples, so
antisymmetry is canonical.  Mixed grades are allowed in one object (the
operations extend bilinearly); most callers keep objects homogeneous.

Sign conventions, fixed here once and inherited by every other module:

* wedge: (f e_K) ^ (g e_L) = f g * sign(K, L) * e_{K u L} with the shuffle
  sign of sorting the concatenation K + L;
* Schouten bracket: the unique extension of the Lie bracket of vector
  fields with [X, f] = X(f) and the graded Leibniz rule
  [a, b ^ c] = [a, b] ^ c + (-1)^((|a|-1)|b|) b ^ [a, c];
* pi tilde: pi_sharp(pi, xi) = pi(xi, .), so for pi = Dx^Dy one has
  pi_sharp(pi, dx) = Dy;
* interior product: (i_X w)(Y_1, ..) = w(X, Y_1, ..);
* Lie derivative on forms: L_X = i_X d + d i_X.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from .charts import Chart, require_same_chart
from .poly import PolyFunc
from .scalars import FormalSeries, Scalar

Key = Tuple[int, ...]


def merge_indices(a: Key, b: Key) -> Optional[Tuple[int, Key]]:
    """Sort the concatenation a + b into increasing order.

    Returns (sign, sorted_tuple) or None when an index repeats.
    """
    if set(a) & set(b):
        return None
    out = list(a + b)
    # counting inversions of a small sequence by insertion
    sign = 1
    for i in range(1, len(out)):
        j = i
        while j > 0 and out[j - 1] > out[j]:
            out[j - 1], out[j] = out[j], out[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(out)


def remove_index(key: Key, pos: int) -> Key:
    return key[:pos] + key[pos + 1:]


class _Alternating:
    """Shared machinery for Multivector and DiffForm."""

    __slots__ = ("chart", "comps")
    _basis_prefix = "?"

    def __init__(self, chart: Chart, comps: Dict[Key, PolyFunc] = None):
        clean: Dict[Key, PolyFunc] = {}
        for key, p in (comps or {}).items():
            key = tuple(key)
            if list(key) != sorted(set(key)):
                raise ValueError(f"component key {key} must be strictly increasing")
            if key and key[-1] >= chart.dim:
                raise ValueError(f"index out of range in {key}")
            if not isinstance(p, PolyFunc):
                p = PolyFunc.constant(chart, p)
            if p.chart != chart:
                raise ValueError("component polynomial on wrong chart")
            if not p.is_zero:
                clean[key] = clean[key] + p if key in clean else p
        clean = {k: p for k, p in clean.items() if not p.is_zero}
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "comps", clean)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    # -- structure --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.comps

    @property
    def is_order_h(self) -> bool:
        return all(p.is_order_h for p in self.comps.values())

    def grades(self) -> Tuple[int, ...]:
        return tuple(sorted({len(k) for k in self.comps}))

    def grade(self) -> int:
        """The grade of a homogeneous element; 0 for zero."""
        gs = self.grades()
        if not gs:
            return 0
        if len(gs) > 1:
            raise ValueError(f"element has mixed grades {gs}")
        return gs[0]

    def component(self, key: Key) -> PolyFunc:
        return self.comps.get(tuple(key), PolyFunc.zero(self.chart))

    def grade_part(self, k: int):
        return type(self)(self.chart, {key: p for key, p in self.comps.items()
                                       if len(key) == k})

    def h_coefficient(self, k: int):
        return type(self)(self.chart,
                          {key: p.h_coefficient(k) for key, p in self.comps.items()})

    def scale_h(self, k: int):
        return type(self)(self.chart,
                          {key: p.scale_h(k) for key, p in self.comps.items()})

    # -- linear operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Scalar, FormalSeries, PolyFunc)):
            other = type(self)(self.chart, {(): PolyFunc.coerce(other, self.chart)})
        require_same_chart(self, other)
        if type(self) is not type(other):
            raise TypeError("cannot add a form to a multivector")
        out = dict(self.comps)
        for k, p in other.comps.items():
            out[k] = out[k] + p if k in out else p
        return type(self)(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)(self.chart, {k: -p for k, p in self.comps.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, _Alternating)
                       else -PolyFunc.coerce(other, self.chart))

    def __mul__(self, other):
        """Scaling by a scalar, series, or polynomial function."""
        if isinstance(other, (int, Fraction, Scalar, FormalSeries)):
            return type(self)(self.chart, {k: p * other for k, p in self.comps.items()})
        if isinstance(other, PolyFunc):
            return type(self)(self.chart, {k: p * other for k, p in self.comps.items()})
        return NotImplemented

    __rmul__ = __mul__

    def wedge(self, other):
        if type(self) is not type(other):
            raise TypeError("wedge requires two elements of the same variance")
        require_same_chart(self, other)
        out: Dict[Key, PolyFunc] = {}
        for k1, p1 in self.comps.items():
            for k2, p2 in other.comps.items():
                m = merge_indices(k1, k2)
                if m is None:
                    continue
                sign, key = m
                t = p1 * p2 * sign
                out[key] = out[key] + t if key in out else t
        return type(self)(self.chart, out)

    # -- comparison / display ---------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, _Alternating):
            return NotImplemented
        if type(self) is not type(other) or self.chart != other.chart:
            return False
        return (self - other).is_zero

    __hash__ = None

    def __bool__(self):
        return not self.is_zero

    def __str__(self):
        from .exprs import format_tensor

        return format_tensor(self)

    def __repr__(self):
        return f"{type(self).__name__}({self})"


class Multivector(_Alternating):
    """Antisymmetric contravariant tensor field (basis Dx_i = d/dx_i)."""

    _basis_prefix = "D"

    @staticmethod
    def zero(chart: Chart) -> "Multivector":
        return Multivector(chart, {})

    @staticmethod
    def from_function(f: PolyFunc) -> "Multivector":
        return Multivector(f.chart, {(): f})

    @staticmethod
    def basis(chart: Chart, name: str) -> "Multivector":
        return Multivector(chart, {(chart.axis(name),): PolyFunc.constant(chart, 1)})


class DiffForm(_Alternating):
    """Antisymmetric covariant tensor field (basis dx_i)."""

    _basis_prefix = "d"

    @staticmethod
    def zero(chart: Chart) -> "DiffForm":
        return DiffForm(chart, {})

    @staticmethod
    def from_function(f: PolyFunc) -> "DiffForm":
        return DiffForm(f.chart, {(): f})

    @staticmethod
    def basis(chart: Chart, name: str) -> "DiffForm":
        return DiffForm(chart, {(chart.axis(name),): PolyFunc.constant(chart, 1)})

    def d(self, axes: Optional[Tuple[int, ...]] = None) -> "DiffForm":
        """Exterior derivative; optionally only along the given axes."""
        axes = range(self.chart.dim) if axes is None else axes
        out: Dict[Key, PolyFunc] = {}
        for key, p in self.comps.items():
            for i in axes:
                dp = p.diff(i)
                if dp.is_zero:
                    continue
                m = merge_indices((i,), key)
                if m is None:
                    continue
                sign, nk = m
                t = dp * sign
                out[nk] = out[nk] + t if nk in out else t
        return DiffForm(self.chart, out)


def de_rham_d(omega: DiffForm) -> DiffForm:
    return omega.d()


def schouten_bracket(a: Multivector, b: Multivector) -> Multivector:
    """Schouten-Nijenhuis bracket in the convention of this module.

    Implemented through odd-coordinate calculus (multivectors as polynomials
    in anticommuting generators xi_i standing for Dx_i):

        [a, b] = sum_i dR(a)/dxi_i . d(b)/dx_i
                 - sum_i d(a)/dx_i . dL(b)/dxi_i

    with dR/dL the right/left odd derivatives.  This is the unique extension
    of the Lie bracket of vector fields with [X, f] = X(f) and the graded
    Leibniz rule [a, b^c] = [a,b]^c + (-1)^((|a|-1)|b|) b^[a,c]; in
    particular [Dx^Dy, x] = -Dy here.
    """
    require_same_chart(a, b)
    chart = a.chart
    out: Dict[Key, PolyFunc] = {}

    def accumulate(key: Key, p: PolyFunc, sign: int):
        if p.is_zero:
            return
        t = p * sign
        out[key] = out[key] + t if key in out else t

    for K, f in a.comps.items():
        p = len(K)
        for L, g in b.comps.items():
            # sum_i dR(a)/dxi_i * d(b)/dx_i
            for pos, i in enumerate(K):
                dg = g.diff(i)
                if dg.is_zero:
                    continue
                m = merge_indices(remove_index(K, pos), L)
                if m is None:
                    continue
                s, key = m
                accumulate(key, f * dg, s * (-1) ** (p - pos - 1))
            # - sum_i d(a)/dx_i * dL(b)/dxi_i  (a's indices stay leftmost)
            for pos, i in enumerate(L):
                df = f.diff(i)
                if df.is_zero:
                    continue
                m = merge_indices(K, remove_index(L, pos))
                if m is None:
                    continue
                s, key = m
                accumulate(key, df * g, -s * (-1) ** pos)
    return Multivector(chart, out)


def interior(X: Multivector, omega: DiffForm) -> DiffForm:
    """i_X omega for a vector field X: (i_X w)(...) = w(X, ...)."""
    require_same_chart(X, omega)
    if X.grades() not in ((), (1,)):
        raise ValueError("interior product needs a vector field")
    out: Dict[Key, PolyFunc] = {}
    for (i,), comp in X.comps.items():
        for key, p in omega.comps.items():
            if i not in key:
                continue
            pos = key.index(i)
            nk = remove_index(key, pos)
            t = comp * p * ((-1) ** pos)
            out[nk] = out[nk] + t if nk in out else t
    return DiffForm(omega.chart, out)


def form_on_vectors(omega: DiffForm, vectors: List[Multivector]) -> PolyFunc:
    """Evaluate a k-form on k vector fields."""
    cur = omega
    for X in vectors:
        cur = interior(X, cur)
    if cur.grades() not in ((), (0,)):
        raise ValueError("degree mismatch in form evaluation")
    return cur.component(())


def pairing_form_multivector(omega: DiffForm, V: Multivector) -> PolyFunc:
    """<omega, V> for equal grade: sum over keys of component products."""
    require_same_chart(omega, V)
    acc = PolyFunc.zero(omega.chart)
    for key, p in omega.comps.items():
        v = V.comps.get(key)
        if v is not None:
            acc = acc + p * v
    return acc


def pi_sharp(pi: Multivector, xi: DiffForm) -> Multivector:
    """The map given by a bivector: pi_sharp(xi) = pi(xi, .).

    For pi = sum_{a<b} c_ab Da^Db and xi = dx_j this is
    sum_a c_aj Da evaluated with the sign convention
    (Da^Db)(dx_a, dx_b) = +1.
    """
    require_same_chart(pi, xi)
    if pi.grades() not in ((), (2,)):
        raise ValueError("pi_sharp needs a bivector")
    if xi.grades() not in ((), (1,)):
        raise ValueError("pi_sharp needs a one-form")
    out: Dict[Key, PolyFunc] = {}
    for (a, b), c in pi.comps.items():
        for (j,), x in xi.comps.items():
            # (Da^Db)(dx_j, .) = delta_aj Db - delta_bj Da
            if j == a:
                t = c * x
                out[(b,)] = out[(b,)] + t if (b,) in out else t
            elif j == b:
                t = -(c * x)
                out[(a,)] = out[(a,)] + t if (a,) in out else t
    return Multivector(pi.chart, out)


def bivector_on_forms(pi: Multivector, xi: DiffForm, eta: DiffForm) -> PolyFunc:
    """pi(xi, eta) = eta(pi_sharp(xi))."""
    return pairing_form_multivector(eta, pi_sharp(pi, xi))


def wedge3_contraction(pi: Multivector, phi: DiffForm) -> Multivector:
    """Apply the bivector's map to every slot of a 3-form.

    For phi = sum f_abc dx_a^dx_b^dx_c returns
    sum f_abc pi_sharp(dx_a)^pi_sharp(dx_b)^pi_sharp(dx_c).
    """
    require_same_chart(pi, phi)
    if pi.grades() not in ((), (2,)):
        raise ValueError("wedge3_contraction needs a bivector")
    if phi.grades() not in ((), (3,)):
        raise ValueError("wedge3_contraction needs a 3-form")
    chart = pi.chart
    images = [pi_sharp(pi, DiffForm(chart, {(j,): PolyFunc.constant(chart, 1)}))
              for j in range(chart.dim)]
    acc = Multivector.zero(chart)
    for (a, b, c), f in phi.comps.items():
        w = images[a].wedge(images[b]).wedge(images[c])
        acc = acc + w * f
    return acc


def lie_derivative_form(X: Multivector, omega: DiffForm) -> DiffForm:
    """Cartan formula L_X = i_X d + d i_X."""
    return interior(X, omega.d()) + interior(X, omega).d()


# -- chart embeddings -------------------------------------------------------


def embed_poly(p: PolyFunc, target: Chart, axis_map: List[int]) -> PolyFunc:
    """Re-express a polynomial on a larger chart; axis_map[i] is the target
    axis of source axis i."""
    out = {}
    for m, c in p.terms.items():
        e = [0] * target.dim
        for i, exp in enumerate(m):
            e[axis_map[i]] = exp
        out[tuple(e)] = c
    return PolyFunc(target, out)


def embed_tensor(t: _Alternating, target: Chart, axis_map: List[int]):
    out = {}
    for key, p in t.comps.items():
        nk = tuple(sorted(axis_map[i] for i in key))
        if list(nk) != sorted(set(nk)):
            raise ValueError("axis map must be injective")
        # axis_map is increasing in all uses, so no extra sign appears
        if tuple(axis_map[i] for i in key) != nk:
            raise ValueError("axis map must preserve index order")
        out[nk] = embed_poly(p, target, axis_map)
    return type(t)(target, out)


def restrict_poly(p: PolyFunc, source_axes: List[int], target: Chart,
                  values: List[Fraction] = None) -> PolyFunc:
    """Project a polynomial to a sub-chart: axes in source_axes map onto
    target's axes in order; all other variables are substituted with the
    fixed values (by full-chart position)."""
    back = {a: i for i, a in enumerate(source_axes)}
    out = {}
    for m, c in p.terms.items():
        e = [0] * target.dim
        scale = Fraction(1)
        ok = True
        for axis, exp in enumerate(m):
            if not exp:
                continue
            if axis in back:
                e[back[axis]] = exp
            else:
                v = None if values is None else values[axis]
                if v is None:
                    ok = False
                    break
                scale *= v ** exp
        if not ok:
            raise ValueError("polynomial depends on an axis with no value")
        if scale:
            key = tuple(e)
            t = c * scale
            out[key] = out[key] + t if key in out else t
    return PolyFunc(target, out)
