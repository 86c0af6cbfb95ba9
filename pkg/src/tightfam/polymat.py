"""Small dense matrices with polynomial-function entries."""

from __future__ import annotations

from typing import List

from .algebra.charts import Chart
from .algebra.poly import PolyFunc
from .algebra.scalars import FormalSeries

Mat = List[List[PolyFunc]]


def zeros(chart: Chart, nrows: int, ncols: int) -> Mat:
    return [[PolyFunc.zero(chart) for _ in range(ncols)] for _ in range(nrows)]


def eye(chart: Chart, n: int) -> Mat:
    m = zeros(chart, n, n)
    for i in range(n):
        m[i][i] = PolyFunc.constant(chart, 1)
    return m


def add(a: Mat, b: Mat) -> Mat:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def neg(a: Mat) -> Mat:
    return [[-x for x in row] for row in a]


def mul(a: Mat, b: Mat) -> Mat:
    nrows, inner, ncols = len(a), len(b), len(b[0]) if b else 0
    chart = a[0][0].chart
    out = zeros(chart, nrows, ncols)
    for i in range(nrows):
        for k in range(inner):
            aik = a[i][k]
            if aik.is_zero:
                continue
            for j in range(ncols):
                if not b[k][j].is_zero:
                    out[i][j] = out[i][j] + aik * b[k][j]
    return out


def is_zero(a: Mat) -> bool:
    return all(x.is_zero for row in a for x in row)


def transpose(a: Mat) -> Mat:
    return [list(col) for col in zip(*a)]


def invert_constant(a: Mat) -> Mat:
    """Inverse of a matrix of constant polynomials whose entries are unit
    series scalars; raises ValueError if any entry is non-constant or the
    matrix is singular."""
    n = len(a)
    chart = a[0][0].chart
    rows = []
    for row in a:
        r = []
        for p in row:
            if not p.is_constant():
                raise ValueError("matrix entry is not constant")
            r.append(p.constant_term())
        rows.append(r)
    aug = [[rows[i][j] for j in range(n)] +
           [FormalSeries.one(rows[i][0].order) if i == j else
            FormalSeries.zero(rows[i][0].order) for j in range(n)]
           for i in range(n)]
    for c in range(n):
        piv = None
        for r in range(c, n):
            s = aug[r][c]
            k = s.coeff(0)
            if k.is_rational and k.re or (k.im and not k.has_period):
                piv = r
                break
        if piv is None:
            raise ValueError("matrix has no invertible pivot")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = aug[c][c].inverse()
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and not aug[r][c].is_zero:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [[PolyFunc.constant(chart, aug[i][n + j]) for j in range(n)]
            for i in range(n)]
