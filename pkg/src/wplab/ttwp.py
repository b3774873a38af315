"""Deciding the word problem of the group generated by beta, sigma, tau.

Generators act on the lattice Z x omega: sigma shifts columns by one, tau
swaps rows 3t+1 and 3t+2 of column 0, and beta swaps rows 3t and 3t+1 of
column g(t) for an injective coder g. Write ``beta_x`` and ``tau_u`` for the
conjugates ``s^x b s^-x`` and ``s^u t s^-u``. A word with zero sigma-exponent
is a product of these, and each of them fixes every column and every row
triple {3t, 3t+1, 3t+2}. So on each such cell the word acts through the
symmetric group on three symbols, and that gives the decision rules:

R1  every beta_x occurs an even number of times. beta_x acts alone on
    infinitely many cells outside the tau columns, because range(g) is
    infinite.
R2  every tau_u occurs an even number of times. Column -u has generic
    triples where only tau_u acts.
R3  for each tau_u and each beta_x with ``x - u`` in range(g) (an oracle
    question), the beta_x/tau_u subword is trivial in S3. That subword acts
    on the single special triple t with ``g(t) = x - u``.

The questions ``x - u`` are fixed by the word before any answer is read,
so the procedure is a truth-table reduction.

Words use the letters ``b``, ``s``, ``t`` by default.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

from .coener import CodedSet, ScheduleUnavailable
from .perms import PERMUTATIONS, Point, beta_from_g, sigma_line, tau_triples
from .words import Letter, Word, commutator, conjugate, evaluate_hom, gen, invert, multiply, power

__all__ = [
    "BETA",
    "SIGMA",
    "TAU",
    "NormalForm",
    "Oracle",
    "Verdict",
    "MissingOracleAnswers",
    "NonzeroSigmaExponent",
    "parse_oracle",
    "sigma_exponent_check",
    "to_normal_form",
    "normal_form_word",
    "subword_projection",
    "s3_image",
    "query_set",
    "decide",
    "decide_word",
    "decide_pair",
    "m_reduction_word",
    "paper_literal_decider",
    "brute_force_identity",
    "certificate_points",
]

BETA, SIGMA, TAU = "b", "s", "t"
_KINDS = (BETA, TAU)


class MissingOracleAnswers(LookupError):
    def __init__(self, missing: Iterable[int]):
        self.missing = sorted(missing)
        super().__init__(f"oracle has no answer for {self.missing}")


class NonzeroSigmaExponent(ValueError):
    pass


# -- oracles -----------------------------------------------------------------

class Oracle:
    """Answers "is m in the range of g", i.e. in the complement of the coded set.

    ``answers`` is a finite table; ``fallback`` (optional) answers the rest.
    Negative ``m`` are answered ``False`` without consulting either, since
    range(g) consists of natural numbers.
    """

    def __init__(self, answers: Optional[Mapping[int, bool]] = None,
                 fallback: Optional[Callable[[int], bool]] = None):
        self.answers = dict(answers or {})
        self.fallback = fallback

    @classmethod
    def from_coded_set(cls, coded: CodedSet) -> "Oracle":
        return cls(fallback=coded.in_complement)

    def knows(self, m: int) -> bool:
        return m < 0 or m in self.answers or self.fallback is not None

    def ask(self, m: int) -> bool:
        if m < 0:
            return False
        if m in self.answers:
            return self.answers[m]
        if self.fallback is None:
            raise MissingOracleAnswers([m])
        return bool(self.fallback(m))

    def ask_all(self, queries: Iterable[int]) -> dict:
        queries = list(queries)
        missing = [m for m in queries if not self.knows(m)]
        if missing:
            raise MissingOracleAnswers(missing)
        return {m: self.ask(m) for m in queries}


def parse_oracle(text: str) -> Oracle:
    """Load ``m 0|1`` lines (1 means m is in range(g))."""
    answers = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or parts[1] not in ("0", "1"):
            raise ValueError(f"line {lineno}: expected 'm 0|1', got {raw!r}")
        answers[int(parts[0])] = parts[1] == "1"
    return Oracle(answers)


# -- normal forms ------------------------------------------------------------

@dataclass(frozen=True)
class NormalForm:
    """Alternating beta- and tau-blocks of indices, read left to right."""

    blocks: tuple = ()

    def letters(self) -> list:
        return [(kind, i) for kind, idx in self.blocks for i in idx]

    @property
    def L(self) -> frozenset:
        return frozenset(i for kind, idx in self.blocks if kind == BETA for i in idx)

    @property
    def M(self) -> frozenset:
        return frozenset(i for kind, idx in self.blocks if kind == TAU for i in idx)

    def counts(self) -> Counter:
        return Counter(self.letters())

    def is_empty(self) -> bool:
        return not self.blocks

    def to_json(self) -> list:
        return [{"kind": kind, "indices": list(idx)} for kind, idx in self.blocks]

    def __str__(self) -> str:
        if not self.blocks:
            return "1"
        return " ".join("".join(f"{k}_{i}" for i in idx).join("[]") for k, idx in self.blocks)


@dataclass(frozen=True)
class Verdict:
    equal_identity: bool
    rule: str
    witness: Mapping = field(default_factory=dict)
    queries: tuple = ()

    def to_json(self) -> dict:
        return {
            "identity": self.equal_identity,
            "rule": self.rule,
            "witness": dict(self.witness),
            "queries": list(self.queries),
        }


def _check_alphabet(w: Word):
    for l in w.letters:
        if l.base not in (BETA, SIGMA, TAU) or l.index is not None:
            raise ValueError(f"letter {l} is not one of {BETA}, {SIGMA}, {TAU}")


def sigma_exponent_check(w: Word) -> int:
    """Sigma-exponent sum of ``w``; a nonzero value already proves ``w != 1``."""
    _check_alphabet(w)
    return sum(l.sign for l in w.letters if l.base == SIGMA)


def _odd_part(indices: Iterable[int]) -> tuple:
    # the family is commuting involutions: keep one copy per odd multiplicity
    c = Counter(indices)
    out, seen = [], set()
    for i in indices:
        if c[i] & 1 and i not in seen:
            seen.add(i)
            out.append(i)
    return tuple(out)


def to_normal_form(w: Word) -> NormalForm:
    """Rewrite ``w`` as alternating products of shifted betas and taus.

    A ``b`` or ``t`` read after a net sigma-shift of ``a`` becomes ``b_a`` or
    ``t_a``. Inside a run of one kind, letters commute and square to 1, so
    only indices of odd multiplicity survive; runs that empty out let their
    neighbours merge.
    """
    if sigma_exponent_check(w) != 0:
        raise NonzeroSigmaExponent(f"sigma-exponent of {w} is nonzero")
    shifted = []
    a = 0
    for l in w.letters:
        if l.base == SIGMA:
            a += l.sign
        else:
            shifted.append((l.base, a))
    stack: list = []
    i = 0
    while i < len(shifted):
        kind = shifted[i][0]
        j = i
        while j < len(shifted) and shifted[j][0] == kind:
            j += 1
        run = [idx for _, idx in shifted[i:j]]
        i = j
        if stack and stack[-1][0] == kind:
            run = list(stack.pop()[1]) + run
        run = _odd_part(run)
        if run:
            stack.append((kind, run))
    return NormalForm(tuple(stack))


def normal_form_word(nf: NormalForm) -> Word:
    """Expand ``b_x`` to ``s^x b s^-x`` and ``t_u`` to ``s^u t s^-u``."""
    parts = []
    for kind, i in nf.letters():
        shift = power(gen(SIGMA), i)
        parts.append(conjugate(gen(kind), invert(shift)))
    return multiply(*parts)


def subword_projection(nf: NormalForm, x: int, u: int) -> Word:
    """Keep only ``b_x`` and ``t_u`` and cancel adjacent equal pairs."""
    stack: list = []
    for kind, i in nf.letters():
        if (kind == BETA and i == x) or (kind == TAU and i == u):
            if stack and stack[-1] == (kind, i):
                stack.pop()
            else:
                stack.append((kind, i))
    return Word(tuple(Letter(kind, i) for kind, i in stack))


_CELL = {BETA: (1, 0, 2), TAU: (0, 2, 1)}
_ID3 = (0, 1, 2)


def s3_image(word: Iterable) -> tuple:
    """Action on a special triple: ``b`` swaps offsets 0/1, ``t`` swaps 1/2.

    Returns the image tuple ``(img(0), img(1), img(2))`` under the
    left-to-right product.
    """
    img = _ID3
    for l in word:
        kind = l.base if isinstance(l, Letter) else l[0]
        s = _CELL[kind]
        img = (s[img[0]], s[img[1]], s[img[2]])
    return img


def query_set(nf: NormalForm) -> frozenset:
    return frozenset(x - u for x in nf.L for u in nf.M)


# -- deciders ----------------------------------------------------------------

def decide(nf: NormalForm, oracle: Oracle) -> Verdict:
    """Decide whether ``nf`` is the identity, asking the oracle every query up front."""
    queries = tuple(sorted(query_set(nf)))
    answers = oracle.ask_all(queries)
    counts = nf.counts()
    for x in sorted(nf.L):
        c = counts[(BETA, x)]
        if c & 1:
            return Verdict(False, "R1-beta-parity", {"x": x, "count": c}, queries)
    for u in sorted(nf.M):
        c = counts[(TAU, u)]
        if c & 1:
            return Verdict(False, "R2-tau-parity", {"u": u, "count": c}, queries)
    for u in sorted(nf.M):
        for x in sorted(nf.L):
            if not answers[x - u]:
                continue
            cell = s3_image(subword_projection(nf, x, u))
            if cell != _ID3:
                return Verdict(False, "R3-special-cell",
                               {"x": x, "u": u, "query": x - u, "cell": list(cell)}, queries)
    return Verdict(True, "identity", {}, queries)


def decide_word(w: Word, oracle: Oracle) -> Verdict:
    e = sigma_exponent_check(w)
    if e != 0:
        return Verdict(False, "sigma-exponent", {"exponent_sum": e}, ())
    return decide(to_normal_form(w), oracle)


def decide_pair(u: Word, v: Word, oracle: Oracle) -> Verdict:
    """Decide ``u == v`` through ``u v^-1 == 1``."""
    return decide_word(multiply(u, invert(v)), oracle)


def m_reduction_word(x: int) -> Word:
    """``[Cj(b, s^-x), t]``, trivial exactly when x is in the coded set."""
    return commutator(conjugate(gen(BETA), power(gen(SIGMA), -x)), gen(TAU))


def paper_literal_decider(nf: NormalForm, oracle: Oracle) -> Verdict:
    """The cancellation procedure read literally, kept for comparison.

    It is wrong in both directions. With no beta letters it never looks at
    the taus, so ``t`` is called trivial. When x - u is in range(g) it counts
    ``b t`` occurrences modulo 3, so ``(t_0 b_0)^6`` (five occurrences, yet
    trivial since the cell action has order 3) is called nontrivial.
    """
    queries = tuple(sorted(query_set(nf)))
    answers = oracle.ask_all(queries)
    counts = nf.counts()
    for x in sorted(nf.L):
        if counts[(BETA, x)] & 1:
            return Verdict(False, "literal-beta-parity", {"x": x, "count": counts[(BETA, x)]},
                           queries)
    for u in sorted(nf.M):
        for x in sorted(nf.L):
            kinds = [l.base for l in subword_projection(nf, x, u)]
            if not answers[x - u]:
                rest = [k for k in kinds if k == TAU]
                if len(rest) & 1:
                    return Verdict(False, "literal-case-1",
                                   {"x": x, "u": u, "length": len(rest)}, queries)
                continue
            pairs = sum(1 for a, b in zip(kinds, kinds[1:]) if (a, b) == (BETA, TAU))
            if pairs % 3:
                return Verdict(False, "literal-case-2-count",
                               {"x": x, "u": u, "occurrences": pairs}, queries)
            rest, i = [], 0
            while i < len(kinds):
                if kinds[i:i + 2] == [BETA, TAU]:
                    i += 2
                else:
                    rest.append(kinds[i])
                    i += 1
            if rest:
                return Verdict(False, "literal-case-2-residue",
                               {"x": x, "u": u, "residue": "".join(rest)}, queries)
    return Verdict(True, "identity", {}, queries)


# -- brute force -------------------------------------------------------------

def _offsets(w: Word) -> tuple:
    a = 0
    betas, taus = set(), set()
    for l in w.letters:
        if l.base == SIGMA:
            a += l.sign
        elif l.base == BETA:
            betas.update((a, -a))
        else:
            taus.update((a, -a))
    return betas, taus


def certificate_points(w: Word, coded: CodedSet) -> list:
    """Points on which the identity test of ``w`` is conclusive.

    Built from the raw sigma-offsets of the word's letters, taken with both
    signs: all special triples of every candidate tau column, one generic
    triple per tau column, and for every candidate beta shift one cell where
    it acts away from the tau columns. Plus the origin, which any word with
    nonzero sigma-exponent moves.
    """
    if not coded.exact:
        raise ScheduleUnavailable("brute force needs the full emission schedule")
    g = coded.g
    betas, taus = _offsets(w)
    pts = [Point(0, 0)]

    def triple(col: int, t: int):
        pts.extend(Point(col, 3 * t + j) for j in range(3))

    for u in sorted(taus):
        hit = set()
        for x in sorted(betas):
            t = g.inverse(x - u)
            if t is not None:
                hit.add(x - u)
                triple(-u, t)
        t = 0
        while g(t) in hit:
            t += 1
        triple(-u, t)
    for x in sorted(betas):
        t = 0
        while x - g(t) in taus:
            t += 1
        triple(g(t) - x, t)
    return pts


def brute_force_identity(w: Word, coded: CodedSet) -> bool:
    """Compose the actual permutations and test the word on its certificate points."""
    _check_alphabet(w)
    assignment = {BETA: beta_from_g(coded.g), SIGMA: sigma_line(), TAU: tau_triples()}
    p = evaluate_hom(w, assignment, PERMUTATIONS)
    return all(p(pt) == pt for pt in certificate_points(w, coded))
