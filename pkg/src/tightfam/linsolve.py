"""Exact linear solving over rationals, with scalar-valued right-hand sides.

Elimination is deterministic: pivots are chosen as the first nonzero entry
in column order, and free variables are set to zero, which realizes the
lexicographically-minimal-support solution for the orderings used by the
callers.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .algebra.scalars import Scalar


class InfeasibleSystemError(ValueError):
    """Raised when an exact linear system has no solution."""

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


def solve_fractions(rows: List[List[Fraction]], rhs: List[Fraction]
                    ) -> Optional[List[Fraction]]:
    """Particular solution of A x = b over Q, or None when inconsistent."""
    m = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((j for j in range(r, len(m)) if m[j][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for j in range(len(m)):
            if j != r and m[j][c]:
                f = m[j][c]
                m[j] = [x - f * y for x, y in zip(m[j], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    for j in range(r, len(m)):
        if m[j][ncols]:
            return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = m[i][ncols]
    return x


def solve_module_rhs(rows: List[List[Fraction]], rhs: List, zero):
    """Solve A x = b where A is rational but b (and hence x) live in any
    Q-module supporting +, - and right multiplication by Fraction.

    Returns the solution list (free variables set to ``zero``), or raises
    :class:`InfeasibleSystemError` naming the failing row.
    """
    m = [list(map(Fraction, row)) for row in rows]
    b = list(rhs)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((j for j in range(r, len(m)) if m[j][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        b[r], b[piv] = b[piv], b[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [x / pv for x in m[r]]
            b[r] = b[r] * (Fraction(1) / pv)
        for j in range(len(m)):
            if j != r and m[j][c]:
                f = m[j][c]
                m[j] = [x - f * y for x, y in zip(m[j], m[r])]
                b[j] = b[j] - b[r] * f
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    for j in range(r, len(m)):
        if b[j] != zero * Fraction(0) and not _module_is_zero(b[j]):
            raise InfeasibleSystemError(f"inconsistent row {j}", row=j)
    x = [zero] * ncols
    for i, c in enumerate(pivots):
        x[c] = b[i]
    return x


def _module_is_zero(v) -> bool:
    z = getattr(v, "is_zero", None)
    if z is not None:
        return bool(z)
    return v == 0


# -- systems with unknown rationals and Scalar coefficients -----------------


def flatten_scalar_rows(rows: List[List[Scalar]], rhs: List[Scalar]
                        ) -> Tuple[List[List[Fraction]], List[Fraction]]:
    """Expand equations sum_j a_ij x_j = b_i with Scalar coefficients and
    rational unknowns into one rational equation per scalar component."""
    frows, frhs = [], []
    for row, b in zip(rows, rhs):
        for comp in range(4):
            frows.append([a.components()[comp] for a in row])
            frhs.append(b.components()[comp])
    return frows, frhs


def solve_rational_unknowns(rows: List[List[Scalar]], rhs: List[Scalar]
                            ) -> List[Fraction]:
    frows, frhs = flatten_scalar_rows(rows, rhs)
    sol = solve_fractions(frows, frhs)
    if sol is None:
        # locate the first inconsistent flattened row for the report
        for k, (row, b) in enumerate(zip(frows, frhs)):
            if not any(row) and b:
                raise InfeasibleSystemError(
                    f"unsatisfiable constraint (component row {k})", row=k)
        raise InfeasibleSystemError("inconsistent system")
    return sol


def solve_scalar_unknowns(rows: List[List[Scalar]], rhs: List[Scalar]
                          ) -> List[Scalar]:
    """Solve with Scalar unknowns.

    Each unknown is expanded into rational and period components; products
    of a period-carrying coefficient with a period-carrying unknown would
    leave the scalar ring, so those components are constrained to cancel.
    """
    n = len(rows[0]) if rows else 0
    frows, frhs = [], []
    for row, b in zip(rows, rhs):
        # component equations: re, im, lre, lim, and two L^2 guards
        comp_rows = [[Fraction(0)] * (4 * n) for _ in range(6)]
        for j, a in enumerate(row):
            are, aim, alre, alim = a.components()
            base = 4 * j
            # unknown ordering: ure, uim, ulre, ulim
            comp_rows[0][base + 0] += are
            comp_rows[0][base + 1] -= aim
            comp_rows[1][base + 0] += aim
            comp_rows[1][base + 1] += are
            comp_rows[2][base + 0] += alre
            comp_rows[2][base + 1] -= alim
            comp_rows[2][base + 2] += are
            comp_rows[2][base + 3] -= aim
            comp_rows[3][base + 0] += alim
            comp_rows[3][base + 1] += alre
            comp_rows[3][base + 2] += aim
            comp_rows[3][base + 3] += are
            comp_rows[4][base + 2] += alre
            comp_rows[4][base + 3] -= alim
            comp_rows[5][base + 2] += alim
            comp_rows[5][base + 3] += alre
        bre, bim, blre, blim = b.components()
        frows.extend(comp_rows)
        frhs.extend([bre, bim, blre, blim, Fraction(0), Fraction(0)])
    sol = solve_fractions(frows, frhs)
    if sol is None:
        raise InfeasibleSystemError("inconsistent scalar system")
    return [Scalar(sol[4 * j], sol[4 * j + 1], sol[4 * j + 2], sol[4 * j + 3])
            for j in range(n)]
