"""Computable permutations of the lattice Z x omega.

Each permutation carries its forward and backward maps explicitly, so an
inverse never needs a search. Composition is lazy: a composite keeps the
flat list of factor maps and evaluates them point by point.

Products follow the left-to-right convention, ``(pq)(s) = q(p(s))``.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, NamedTuple, Optional, Sequence

__all__ = [
    "Point",
    "Region",
    "Permutation",
    "BoundViolation",
    "IDENTITY",
    "PERMUTATIONS",
    "apply",
    "apply_inverse",
    "compose",
    "inverse",
    "column_shift",
    "sigma_paired",
    "tau_paired",
    "alpha_from_f",
    "sigma_line",
    "tau_triples",
    "beta_from_g",
    "cycle_adder",
    "bounded_equal",
    "first_difference",
    "is_identity_on",
    "orbit",
    "order_on",
]


class Point(NamedTuple):
    col: int
    row: int

    def to_json(self) -> dict:
        return {"col": self.col, "row": self.row}


@dataclass(frozen=True)
class Region:
    cmin: int
    cmax: int
    rmax: int

    def __post_init__(self):
        if self.cmin > self.cmax or self.rmax < 0:
            raise ValueError(f"empty region {self}")

    def points(self) -> Iterator[Point]:
        for c in range(self.cmin, self.cmax + 1):
            for r in range(self.rmax + 1):
                yield Point(c, r)

    def __len__(self) -> int:
        return (self.cmax - self.cmin + 1) * (self.rmax + 1)

    def to_json(self) -> dict:
        return {"cols": [self.cmin, self.cmax], "rows": [0, self.rmax]}


class BoundViolation(ValueError):
    """A column function returned a value outside ``0 <= f(x, n) <= x``."""

    def __init__(self, x: int, n: int, value: int):
        super().__init__(f"f({x}, {n}) = {value} violates 0 <= f(x, n) <= x")
        self.x, self.n, self.value = x, n, value


PointMap = Callable[[Point], Point]


class Permutation:
    __slots__ = ("_fwd", "_bwd", "label", "_power")

    def __init__(self, forward: Sequence[PointMap] | PointMap,
                 backward: Sequence[PointMap] | PointMap, label: str = "",
                 power: Optional[Callable[[int], "Permutation"]] = None):
        # stored as chains of maps applied in order
        self._fwd = tuple(forward) if isinstance(forward, (tuple, list)) else (forward,)
        self._bwd = tuple(backward) if isinstance(backward, (tuple, list)) else (backward,)
        self.label = label
        self._power = power

    def power(self, k: int) -> "Permutation":
        """``self`` composed ``k`` times (``k < 0`` uses the inverse)."""
        if self._power is not None:
            return self._power(k)
        base = self if k >= 0 else self.inverse()
        out = IDENTITY
        for _ in range(abs(k)):
            out = compose(out, base)
        return out

    def forward(self, pt: Point) -> Point:
        for f in self._fwd:
            pt = f(pt)
        return pt

    def backward(self, pt: Point) -> Point:
        for f in self._bwd:
            pt = f(pt)
        return pt

    __call__ = forward

    def inverse(self) -> "Permutation":
        return Permutation(self._bwd, self._fwd, f"({self.label})^-1")

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __repr__(self) -> str:
        return f"Permutation({self.label!r})"


IDENTITY = Permutation((), (), "id")


def apply(p: Permutation, pt: Point) -> Point:
    return p.forward(Point(*pt))


def apply_inverse(p: Permutation, pt: Point) -> Point:
    return p.backward(Point(*pt))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``pq``: first ``p``, then ``q``."""
    return Permutation(p._fwd + q._fwd, q._bwd + p._bwd, f"{p.label}*{q.label}")


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


class _PermutationGroup:
    """Target structure for ``words.evaluate_hom``."""

    def identity(self) -> Permutation:
        return IDENTITY

    def multiply(self, a: Permutation, b: Permutation) -> Permutation:
        return compose(a, b)

    def invert(self, a: Permutation) -> Permutation:
        return a.inverse()

    def power(self, a: Permutation, k: int) -> Permutation:
        return a.power(k)


PERMUTATIONS = _PermutationGroup()


# -- the named constructors --------------------------------------------------

def column_shift(d: int, label: str = "") -> Permutation:
    """Translate every point by ``d`` columns."""
    return Permutation(lambda p: Point(p[0] + d, p[1]),
                       lambda p: Point(p[0] - d, p[1]),
                       label or f"shift({d})",
                       lambda k: column_shift(k * d))


def sigma_paired() -> Permutation:
    """Shift every column pair one pair to the right: column c -> c + 2."""
    return column_shift(2, "sigma")


def _swap01(p: Point) -> Point:
    c = p[0]
    return Point(1 - c, p[1]) if c == 0 or c == 1 else p


def tau_paired() -> Permutation:
    """Exchange columns 0 and 1, row by row."""
    return Permutation(_swap01, _swap01, "tau")


def alpha_from_f(f: Callable[[int, int], int]) -> Permutation:
    """Code the column function ``f`` as cycles in the even columns.

    Column ``2x`` is cut into consecutive blocks of ``x + 1`` rows; in block
    ``n`` the offsets ``0, 1, ..., f(x, n)`` form one cycle moving each offset
    up by one and the last back to 0. Offsets above ``f(x, n)``, odd columns
    and negative columns are fixed. ``f`` is queried lazily, one block at a
    time, and must satisfy ``0 <= f(x, n) <= x``.
    """

    def value(x: int, n: int) -> int:
        v = f(x, n)
        if not 0 <= v <= x:
            raise BoundViolation(x, n, v)
        return v

    def fwd(p: Point) -> Point:
        c, r = p
        if c < 0 or c & 1:
            return p
        x = c >> 1
        n, k = divmod(r, x + 1)
        v = value(x, n)
        if k < v:
            return Point(c, r + 1)
        if k == v:
            return Point(c, r - k)
        return p

    def bwd(p: Point) -> Point:
        c, r = p
        if c < 0 or c & 1:
            return p
        x = c >> 1
        n, k = divmod(r, x + 1)
        v = value(x, n)
        if k == 0:
            return Point(c, r + v)
        if k <= v:
            return Point(c, r - 1)
        return p

    name = getattr(f, "name", getattr(f, "__name__", "f"))
    return Permutation(fwd, bwd, f"alpha[{name}]")


def sigma_line() -> Permutation:
    """Shift to the next column: column c -> c + 1."""
    return column_shift(1, "sigma")


def _tau3(p: Point) -> Point:
    if p[0] != 0:
        return p
    j = p[1] % 3
    if j == 1:
        return Point(0, p[1] + 1)
    if j == 2:
        return Point(0, p[1] - 1)
    return p


def tau_triples() -> Permutation:
    """In column 0, swap rows 3t+1 and 3t+2 for every t."""
    return Permutation(_tau3, _tau3, "tau")


def beta_from_g(g) -> Permutation:
    """Code the graph of an injective ``g``: swap rows 3t and 3t+1 of column g(t).

    ``g`` needs a ``graph(t, v)`` method deciding ``g(t) == v``; deciding
    whether a point moves costs exactly one graph query.
    """
    graph = g.graph

    def swap(p: Point) -> Point:
        c, r = p
        if c < 0:
            return p
        t, j = divmod(r, 3)
        if j == 2 or not graph(t, c):
            return p
        return Point(c, r + 1 if j == 0 else r - 1)

    return Permutation(swap, swap, "beta")


def cycle_adder(e, steps: Optional[int] = None) -> Permutation:
    """Add one n-cycle per emitted n, on fresh rows of column 0.

    ``e`` is either a finite iterable of positive integers in emission order
    or a step enumerator (anything with ``at(t)``), snapshotted over
    ``range(steps)``. Blocks are allocated in emission order, each starting
    at the first unused row.
    """
    if hasattr(e, "at"):
        if steps is None:
            raise ValueError("a step enumerator needs a finite snapshot bound")
        values = [v for v in (e.at(t) for t in range(steps)) if v is not None]
    else:
        values = list(e)
    starts: list = []
    lengths: list = []
    row = 0
    for n in values:
        if n <= 0:
            raise ValueError(f"cycle lengths must be positive, got {n}")
        starts.append(row)
        lengths.append(n)
        row += n
    end = row

    def locate(p: Point):
        if p[0] != 0 or p[1] >= end:
            return None
        i = bisect.bisect_right(starts, p[1]) - 1
        return starts[i], lengths[i]

    def fwd(p: Point) -> Point:
        blk = locate(p)
        if blk is None:
            return p
        s, n = blk
        return Point(0, s + (p[1] - s + 1) % n)

    def bwd(p: Point) -> Point:
        blk = locate(p)
        if blk is None:
            return p
        s, n = blk
        return Point(0, s + (p[1] - s - 1) % n)

    return Permutation(fwd, bwd, f"cycles{tuple(values)}")


# -- bounded comparison ------------------------------------------------------

def first_difference(p: Permutation, q: Permutation, region: Region) -> Optional[Point]:
    for pt in region.points():
        if p.forward(pt) != q.forward(pt):
            return pt
    return None


def bounded_equal(p: Permutation, q: Permutation, region: Region) -> bool:
    return first_difference(p, q, region) is None


def is_identity_on(p: Permutation, region: Region) -> bool:
    return all(p.forward(pt) == pt for pt in region.points())


def orbit(p: Permutation, pt: Point, limit: int = 10_000) -> list:
    """Forward orbit of ``pt``; raises if longer than ``limit``."""
    pt = Point(*pt)
    out = [pt]
    q = p.forward(pt)
    while q != pt:
        out.append(q)
        if len(out) > limit:
            raise RuntimeError(f"orbit of {pt} exceeds {limit} points")
        q = p.forward(q)
    return out


def order_on(p: Permutation, points: Iterable[Point], limit: int = 10_000) -> int:
    """Least common multiple of orbit lengths over ``points``."""
    return math.lcm(1, *(len(orbit(p, pt, limit)) for pt in points))
