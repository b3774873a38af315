"""Co-c.e. equivalence relations presented by a column function.

A column function ``f`` with ``f(x, n) <= x`` presents the relation
``x E y  <=>  f(x, n) == f(y, n) for every n``. The three permutations
sigma, tau, alpha (with alpha built from ``f``) generate a group in which
the words ``t_x`` are meant to carry exactly the row ``f(x, .)`` into the
column pair 0/1, so that ``t_x == t_y`` tracks ``x E y``.

Everything here is bounded: equality of infinite permutations and the
universal quantifier over ``n`` are both checked up to an explicit bound,
and every report states that bound.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

from .perms import (
    PERMUTATIONS,
    BoundViolation,
    Permutation,
    Point,
    Region,
    alpha_from_f,
    first_difference,
    sigma_paired,
    tau_paired,
)
from .words import Word, conjugate, evaluate_hom, free_reduce, gen, invert, multiply, power

__all__ = [
    "ColumnFunction",
    "BoundViolation",
    "CodedGroup",
    "identity_presentation",
    "trivial_presentation",
    "mod_presentation",
    "table_presentation",
    "parse_table",
    "builtin",
    "first_disagreement",
    "relation_holds_bounded",
    "term_t",
    "predicted_t_action",
    "witness_region",
    "verify_code_equation",
    "reduction_check",
    "ALPHA",
    "SIGMA",
    "TAU",
]

ALPHA, SIGMA, TAU = "a", "s", "t"


@dataclass(frozen=True)
class ColumnFunction:
    func: Callable[[int, int], int] = field(compare=False)
    name: str

    def __call__(self, x: int, n: int) -> int:
        v = self.func(x, n)
        if not 0 <= v <= x:
            raise BoundViolation(x, n, v)
        return v


def identity_presentation() -> ColumnFunction:
    return ColumnFunction(lambda x, n: x, "identity")


def trivial_presentation() -> ColumnFunction:
    return ColumnFunction(lambda x, n: 0, "trivial")


def mod_presentation(k: int) -> ColumnFunction:
    if k < 1:
        raise ValueError("modulus must be positive")
    return ColumnFunction(lambda x, n: x % k, f"mod-{k}")


_DEFAULTS = {"x": lambda x, n: x, "0": lambda x, n: 0}


def _default_rule(expr: str) -> Callable[[int, int], int]:
    expr = " ".join(expr.split())
    if expr in _DEFAULTS:
        return _DEFAULTS[expr]
    parts = expr.split()
    if len(parts) == 3 and parts[:2] == ["x", "mod"] and parts[2].isdigit() and int(parts[2]) > 0:
        k = int(parts[2])
        return lambda x, n: x % k
    raise ValueError(f"unknown default rule {expr!r}; expected 'x', '0' or 'x mod k'")


def table_presentation(table: Mapping[tuple, int], default: str = "0",
                       name: str = "table") -> ColumnFunction:
    """Finite table of ``(x, n) -> value`` entries with a default rule elsewhere."""
    for (x, n), v in table.items():
        if not 0 <= v <= x:
            raise BoundViolation(x, n, v)
    table = dict(table)
    rule = _default_rule(default)

    def f(x: int, n: int) -> int:
        v = table.get((x, n))
        return rule(x, n) if v is None else v

    return ColumnFunction(f, name)


def parse_table(text: str, name: str = "table") -> ColumnFunction:
    """Load the ``x n value`` / ``default <expr>`` text format.

    Blank lines and ``#`` comments are ignored. Rows with ``value > x`` are
    rejected with :class:`BoundViolation`.
    """
    table: dict = {}
    default = "0"
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("default"):
            default = line[len("default"):].strip()
            _default_rule(default)
            continue
        parts = line.split()
        if len(parts) != 3 or not all(p.isdigit() for p in parts):
            raise ValueError(f"line {lineno}: expected 'x n value', got {raw!r}")
        x, n, v = map(int, parts)
        if v > x:
            raise BoundViolation(x, n, v)
        table[(x, n)] = v
    return table_presentation(table, default, name)


def builtin(spec: str) -> ColumnFunction:
    """Look up ``identity``, ``trivial`` or ``mod:<k>``."""
    if spec == "identity":
        return identity_presentation()
    if spec == "trivial":
        return trivial_presentation()
    if spec.startswith("mod:"):
        return mod_presentation(int(spec[4:]))
    raise ValueError(f"unknown presentation {spec!r}")


# -- the relation ------------------------------------------------------------

def first_disagreement(f: ColumnFunction, x: int, y: int, N: int) -> Optional[int]:
    for n in range(N + 1):
        if f(x, n) != f(y, n):
            return n
    return None


def relation_holds_bounded(f: ColumnFunction, x: int, y: int, N: int) -> bool:
    """``f(x, n) == f(y, n)`` for all ``n <= N``.

    ``False`` refutes ``x E y``; ``True`` only affirms it up to ``N``.
    """
    return first_disagreement(f, x, y, N) is None


# -- the coding group --------------------------------------------------------

@dataclass(frozen=True)
class CodedGroup:
    f: ColumnFunction
    sigma: Permutation = field(default_factory=sigma_paired, compare=False)
    tau: Permutation = field(default_factory=tau_paired, compare=False)
    alpha: Permutation = field(default=None, compare=False)
    _tables: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.alpha is None:
            object.__setattr__(self, "alpha", alpha_from_f(self.f))

    def t(self, x: int) -> Permutation:
        return self.evaluate(term_t(x))

    def t_column_images(self, x: int, rmax: int) -> tuple:
        """Images under ``t_x`` of the points of columns 0 and 1, rows ``0..rmax``.

        Memoized per ``x``; the result lists column 0 first, then column 1,
        and may extend beyond ``rmax``.
        """
        have = self._tables.setdefault(x, ([], []))
        if len(have[0]) <= rmax:
            p = self.t(x)
            for c in (0, 1):
                have[c].extend(p(Point(c, r)) for r in range(len(have[c]), rmax + 1))
        return have

    @property
    def assignment(self) -> dict:
        return {ALPHA: self.alpha, SIGMA: self.sigma, TAU: self.tau}

    def evaluate(self, w: Word) -> Permutation:
        return evaluate_hom(w, self.assignment, PERMUTATIONS)


@functools.lru_cache(maxsize=256)
def term_t(x: int) -> Word:
    """``t_x = Cj(a, s^-x) t Cj(a^-1, s^-x)`` with ``Cj(u, v) = v^-1 u v``."""
    if x < 0:
        raise ValueError("t_x is defined for x >= 0")
    shift = power(gen(SIGMA), -x)
    a = gen(ALPHA)
    return free_reduce(multiply(conjugate(a, shift), gen(TAU), conjugate(invert(a), shift)))


def predicted_t_action(f: ColumnFunction, x: int, pt: Point) -> Point:
    """Action of ``t_x`` after all cancellations: alpha's column 2x moved onto columns 0/1."""
    u, y = pt
    if u not in (0, 1):
        return Point(u, y)
    n, k = divmod(y, x + 1)
    v = f(x, n)
    if u == 0:
        # alpha restricted to column 2x
        k = k + 1 if k < v else (0 if k == v else k)
        return Point(1, n * (x + 1) + k)
    k = v if k == 0 else (k - 1 if k <= v else k)
    return Point(0, n * (x + 1) + k)


def witness_region(x: int, y: int, N: int) -> Region:
    return Region(0, 1, (N + 1) * (max(x, y) + 1))


@dataclass
class CodeReport:
    x: int
    y: int
    N: int
    region: Region
    f_agree: bool
    f_witness: Optional[int]
    perm_agree: bool
    perm_witness: Optional[Point]
    f_values: Optional[tuple] = None
    perm_images: Optional[tuple] = None

    @property
    def consistent(self) -> bool:
        return self.f_agree == self.perm_agree

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "N": self.N,
            "region": self.region.to_json(),
            "f_agree": self.f_agree,
            "f_witness": self.f_witness,
            "f_values": None if self.f_values is None else list(self.f_values),
            "perm_agree": self.perm_agree,
            "perm_witness": None if self.perm_witness is None else self.perm_witness.to_json(),
            "perm_images": None if self.perm_images is None
            else [p.to_json() for p in self.perm_images],
            "consistent": self.consistent,
        }


def verify_code_equation(f: ColumnFunction, x: int, y: int, N: int,
                         group: Optional[CodedGroup] = None) -> CodeReport:
    """Check both sides of the coding equivalence for ``x, y`` up to ``N``.

    The left side compares ``f(x, n)`` and ``f(y, n)`` for ``n <= N``; the right
    side compares ``t_x`` and ``t_y`` on columns 0..1, rows
    ``0..(N + 1) * (max(x, y) + 1)``. Refutations carry a witness.
    """
    group = group or CodedGroup(f)
    region = witness_region(x, y, N)
    n0 = first_disagreement(f, x, y, N)
    tx, ty = group.t(x), group.t(y)
    pt = None
    if x != y:
        ix = group.t_column_images(x, region.rmax)
        iy = group.t_column_images(y, region.rmax)
        pt = next((Point(c, r) for c in (0, 1) for r in range(region.rmax + 1)
                   if ix[c][r] != iy[c][r]), None)
    return CodeReport(
        x, y, N, region,
        f_agree=n0 is None,
        f_witness=n0,
        perm_agree=pt is None,
        perm_witness=pt,
        f_values=None if n0 is None else (f(x, n0), f(y, n0)),
        perm_images=None if pt is None else (tx(pt), ty(pt)),
    )


@dataclass
class ReductionReport:
    N: int
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"N": self.N, "checked": self.checked, "violations": self.violations}


def reduction_check(f: ColumnFunction, candidate: Callable[[int], Word],
                    sample: Iterable[tuple], N: int,
                    group: Optional[CodedGroup] = None) -> ReductionReport:
    """Bounded check that ``candidate`` reduces the presented relation to word equality.

    For every sampled pair the bounded relation is compared with equality of
    the image words' permutations on the pair's witness region.
    """
    group = group or CodedGroup(f)
    cache: dict = {}

    def image(x: int) -> Permutation:
        if x not in cache:
            cache[x] = group.evaluate(candidate(x))
        return cache[x]

    report = ReductionReport(N)
    for x, y in sample:
        report.checked += 1
        rel = relation_holds_bounded(f, x, y, N)
        pt = first_difference(image(x), image(y), witness_region(x, y, N))
        if rel != (pt is None):
            report.violations.append({
                "x": x, "y": y, "relation": rel, "words_equal": pt is None,
                "point": None if pt is None else pt.to_json(),
            })
    return report
