"""Finite presentations, abelianization and Smith normal form.

The strong diagonal function here maps a finite list of presentations to a
presentation of ``Z x prod (G_u)_ab``. Its torsion-free rank exceeds that of
every abelianized input, so it is not isomorphic to any abelian input. A
non-abelian input differs from it because the output group is abelian.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .words import Letter, Word, commutator, exponent_sum, gen, parse_word, format_word

__all__ = [
    "Presentation",
    "AbelianInvariants",
    "parse_presentation",
    "format_presentation",
    "abelianize",
    "relation_matrix",
    "smith_normal_form",
    "abelian_invariants",
    "abelian_iso",
    "strong_diagonal",
    "diagonal_check",
    "rename",
]


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(self.relators))
        if len(set(self.generators)) != len(self.generators):
            raise ValueError(f"repeated generator in {self.generators}")
        gens = set(self.generators)
        for r in self.relators:
            for l in r.letters:
                if l.index is not None or l.base not in gens:
                    raise ValueError(f"relator {format_word(r)} uses unknown generator {l}")

    def __str__(self) -> str:
        rels = ", ".join(format_word(r) for r in self.relators)
        return f"<{', '.join(self.generators)}; {rels}>"


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    invariant_factors: tuple = ()

    def __post_init__(self):
        d = tuple(self.invariant_factors)
        object.__setattr__(self, "invariant_factors", d)
        if self.free_rank < 0 or any(x <= 1 for x in d):
            raise ValueError(f"bad invariants {self}")
        if any(b % a for a, b in zip(d, d[1:])):
            raise ValueError(f"invariant factors {d} do not form a divisibility chain")

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "invariant_factors": list(self.invariant_factors)}


def parse_presentation(text: str) -> Presentation:
    """First line: generator names. Each further nonblank line: one relator."""
    lines = [l.split("#", 1)[0].strip() for l in text.splitlines()]
    lines = [l for l in lines if l]
    if not lines:
        raise ValueError("empty presentation file")
    gens = tuple(lines[0].split())
    return Presentation(gens, tuple(parse_word(l) for l in lines[1:]))


def format_presentation(p: Presentation) -> str:
    return "\n".join([" ".join(p.generators)] + [format_word(r) for r in p.relators]) + "\n"


def rename(p: Presentation, prefix: str) -> Presentation:
    def w(r: Word) -> Word:
        return Word(tuple(Letter(prefix + l.base, None, l.sign) for l in r.letters))

    return Presentation(tuple(prefix + g for g in p.generators), tuple(w(r) for r in p.relators))


def abelianize(p: Presentation) -> Presentation:
    comms = tuple(commutator(gen(a), gen(b)) for a, b in combinations(p.generators, 2))
    return Presentation(p.generators, p.relators + comms)


def relation_matrix(p: Presentation) -> list:
    """Exponent sums of each relator; zero rows (commutators among them) are dropped."""
    rows = []
    for r in p.relators:
        row = [exponent_sum(r, g) for g in p.generators]
        if any(row):
            rows.append(row)
    return rows


# -- Smith normal form -------------------------------------------------------

def _identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]], want_transforms: bool = False,
                      ncols: Optional[int] = None):
    """Smith normal form ``D`` of an integer matrix, with ``U M V = D`` if asked.

    Works over Python integers. Each stage pivots on a nonzero entry of least
    absolute value in the remaining block and clears its row and column by
    division with remainder. If some remaining entry is not divisible by the
    pivot, its row is added to the pivot row and the stage is repeated.

    ``ncols`` gives the column count for matrices with no rows.
    """
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    if any(len(row) != n for row in A):
        raise ValueError("matrix is not rectangular")
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row dst += k * row src
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    add_row(i, t, -q)
                if A[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    add_col(j, t, -q)
                if A[t][j]:
                    done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < m and A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    if want_transforms:
        return A, U, V
    return A


def _diagonal(D: list) -> list:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def abelian_invariants(p: Presentation) -> AbelianInvariants:
    rows = relation_matrix(p)
    n = len(p.generators)
    diag = _diagonal(smith_normal_form(rows, ncols=n)) if rows else []
    nonzero = [d for d in diag if d]
    return AbelianInvariants(n - len(nonzero), tuple(d for d in nonzero if d > 1))


def abelian_iso(p1: Presentation, p2: Presentation) -> bool:
    """Isomorphism of the abelianizations."""
    return abelian_invariants(p1) == abelian_invariants(p2)


# -- strong diagonal ---------------------------------------------------------

FRESH = "z"


def strong_diagonal(presentations: Iterable[Presentation]) -> Presentation:
    """Presentation of ``Z x (G_1)_ab x ... x (G_r)_ab``.

    Generators of ``G_u`` are renamed ``g{u}_<name>`` (u counted from 1) and
    the new free factor is ``z``. Relators: the renamed relators of every
    input, then every commutator between two distinct generators.
    """
    gens: list = []
    rels: list = []
    for u, p in enumerate(presentations, 1):
        q = rename(p, f"g{u}_")
        gens.extend(q.generators)
        rels.extend(q.relators)
    gens.append(FRESH)
    return abelianize(Presentation(tuple(gens), tuple(rels)))


@dataclass
class DiagonalReport:
    output_invariants: AbelianInvariants
    entries: list

    @property
    def passed(self) -> bool:
        return all(e["passed"] for e in self.entries)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "output": self.output_invariants.to_json(),
            "inputs": self.entries,
        }


def diagonal_check(delta: Presentation, S: Sequence[Presentation]) -> DiagonalReport:
    """Check that ``delta`` is outside the isomorphism closure of ``S``, at the abelian level.

    For each input the output's torsion-free rank must strictly exceed the
    rank of the input's abelianization, and the two abelian groups must not
    be isomorphic.
    """
    out = abelian_invariants(delta)
    entries = []
    for u, p in enumerate(S, 1):
        inv = abelian_invariants(abelianize(p))
        iso = out == inv
        entries.append({
            "input": u,
            "invariants": inv.to_json(),
            "rank_witness": [out.free_rank, inv.free_rank],
            "abelian_iso": iso,
            "passed": out.free_rank > inv.free_rank and not iso,
        })
    return DiagonalReport(out, entries)
