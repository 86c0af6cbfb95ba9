"""Coordinate charts: named axes over an axis-aligned box (or all of R^n)."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence, Tuple


class ChartMismatchError(ValueError):
    """Raised when two objects on different charts are combined."""


class Chart:
    """An n-dimensional coordinate chart with distinct axis names.

    The domain is either all of R^n (``bounds`` is None) or an axis-aligned
    box given per-axis as (lo, hi) pairs with exact rational endpoints; a
    pair may be None for an unbounded axis.
    """

    __slots__ = ("names", "bounds", "_index")

    def __init__(self, names: Sequence[str], bounds: Optional[Sequence] = None):
        names = tuple(names)
        if len(names) < 1:
            raise ValueError("a chart needs at least one coordinate")
        if len(set(names)) != len(names):
            raise ValueError("coordinate names must be distinct")
        object.__setattr__(self, "names", names)
        if bounds is not None:
            bounds = tuple(
                None if b is None else (Fraction(b[0]), Fraction(b[1])) for b in bounds
            )
            if len(bounds) != len(names):
                raise ValueError("one bounds pair per axis required")
            for b in bounds:
                if b is not None and b[0] >= b[1]:
                    raise ValueError("empty box")
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "_index", {n: k for k, n in enumerate(names)})

    def __setattr__(self, name, value):
        raise AttributeError("Chart is immutable")

    @property
    def dim(self) -> int:
        return len(self.names)

    def axis(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no coordinate {name!r} on chart {self}") from None

    def contains(self, point: Sequence) -> bool:
        pt = as_point(point)
        if len(pt) != self.dim:
            return False
        if self.bounds is None:
            return True
        for x, b in zip(pt, self.bounds):
            if b is not None and not (b[0] <= x <= b[1]):
                return False
        return True

    def center(self) -> Tuple[Fraction, ...]:
        """A canonical interior point: box midpoint, 0 on unbounded axes."""
        if self.bounds is None:
            return tuple(Fraction(0) for _ in self.names)
        return tuple(
            Fraction(0) if b is None else (b[0] + b[1]) / 2 for b in self.bounds
        )

    def __eq__(self, other):
        return (
            isinstance(other, Chart)
            and self.names == other.names
            and self.bounds == other.bounds
        )

    def __hash__(self):
        return hash((self.names, self.bounds))

    def __repr__(self):
        return f"Chart({', '.join(self.names)})"


def require_same_chart(a, b):
    if a.chart != b.chart:
        raise ChartMismatchError(f"chart mismatch: {a.chart} vs {b.chart}")


def as_point(coords: Sequence) -> Tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in coords)


class ProductChart:
    """The product M x B of two charts, with the axis split recorded.

    B's coordinates are renamed with a suffix when they collide with M's
    (the common case B = M).
    """

    __slots__ = ("m", "b", "chart", "m_axes", "b_axes", "b_names")

    def __init__(self, m: Chart, b: Chart, b_suffix: str = "_b"):
        b_names = []
        for n in b.names:
            nn = n + b_suffix if n in m.names else n
            if nn in m.names or nn in b_names:
                raise ValueError(f"cannot disambiguate coordinate {n!r}")
            b_names.append(nn)
        names = m.names + tuple(b_names)
        mb = None if m.bounds is None else m.bounds
        bb = None if b.bounds is None else b.bounds
        bounds = None
        if mb is not None or bb is not None:
            bounds = tuple(mb or (None,) * m.dim) + tuple(bb or (None,) * b.dim)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "chart", Chart(names, bounds))
        object.__setattr__(self, "m_axes", tuple(range(m.dim)))
        object.__setattr__(self, "b_axes", tuple(range(m.dim, m.dim + b.dim)))
        object.__setattr__(self, "b_names", tuple(b_names))

    def __setattr__(self, name, value):
        raise AttributeError("ProductChart is immutable")

    def is_m_axis(self, k: int) -> bool:
        return k < self.m.dim

    def __eq__(self, other):
        return isinstance(other, ProductChart) and self.chart == other.chart \
            and self.m == other.m and self.b == other.b

    def __hash__(self):
        return hash((self.chart, self.m, self.b))

    def __repr__(self):
        return f"ProductChart({self.m!r} x {self.b!r})"
