"""Seeded random instances for the sweeps and property tests."""
from __future__ import annotations

import random
from typing import Optional

from .abelian import Presentation
from .coener import CodedSet, Schedule
from .ttwp import BETA, SIGMA, TAU
from .words import Letter, Word, commutator, conjugate, free_reduce, gen, multiply, power

__all__ = [
    "random_letters",
    "random_reduced_word",
    "random_bst_word",
    "standard_coded_sets",
    "random_presentation",
    "random_matrix",
]

WEIGHTS = {BETA: 0.4, TAU: 0.3, SIGMA: 0.3}


def random_letters(rng: random.Random, alphabet=("a", "b", "c"), length: int = 10,
                   indexed: bool = True) -> list:
    out = []
    for _ in range(length):
        base = rng.choice(alphabet)
        index = rng.choice([None, None, rng.randint(-3, 3)]) if indexed else None
        out.append(Letter(base, index, rng.choice((1, -1))))
    return out


def random_reduced_word(rng: random.Random, max_length: int = 12, **kw) -> Word:
    return free_reduce(random_letters(rng, length=rng.randint(0, max_length), **kw))


def _plain(rng: random.Random, length: int, weights=WEIGHTS) -> list:
    names = list(weights)
    picks = rng.choices(names, [weights[k] for k in names], k=length)
    return [Letter(k, None, rng.choice((1, -1))) for k in picks]


def _motif(rng: random.Random, max_shift: int) -> Word:
    # pieces that tend to cancel, so that identity verdicts are not rare
    a, b = rng.randint(-max_shift, max_shift), rng.randint(-max_shift, max_shift)
    bx = conjugate(gen(BETA), power(gen(SIGMA), -a))
    tu = conjugate(gen(TAU), power(gen(SIGMA), -b))
    k = rng.choice([1, 2, 3, 6])
    choice = rng.randrange(4)
    if choice == 0:
        return commutator(bx, tu)
    if choice == 1:
        return power(multiply(bx, tu), 2 * k)
    if choice == 2:
        return power(multiply(tu, bx), 2 * k)
    return multiply(bx, bx)


def random_bst_word(rng: random.Random, max_length: int = 40, balance: float = 0.5,
                    motif_rate: float = 0.5, max_shift: int = 4) -> Word:
    """Random word over b, s, t of length at most ``max_length``.

    With probability ``balance`` the sigma-exponent is forced to zero by
    appending compensating sigmas. With probability ``motif_rate`` the word is
    assembled from conjugated beta/tau motifs instead of uniform letters.
    """
    balanced = rng.random() < balance
    if rng.random() < motif_rate:
        letters: list = []
        while True:
            m = _motif(rng, max_shift)
            if rng.random() < 0.3:
                m = conjugate(m, Word(tuple(_plain(rng, rng.randint(1, 3)))))
            if len(letters) + len(m) > max_length - (0 if balanced else 1):
                break
            letters.extend(m.letters)
            if rng.random() < 0.4:
                break
        if not balanced:
            letters.append(Letter(SIGMA, None, rng.choice((1, -1))))
    else:
        n = rng.randint(1, max_length)
        letters = _plain(rng, n)
        if balanced:
            e = sum(l.sign for l in letters if l.base == SIGMA)
            while abs(e) > 0:
                # replace letters until the sigma sum can be cancelled within the budget
                if len(letters) + abs(e) <= max_length:
                    s = -1 if e > 0 else 1
                    for _ in range(abs(e)):
                        letters.insert(rng.randint(0, len(letters)), Letter(SIGMA, None, s))
                    break
                letters.pop(rng.randrange(len(letters)))
                e = sum(l.sign for l in letters if l.base == SIGMA)
    return Word(tuple(letters))


def standard_coded_sets() -> dict:
    """Three schedule-backed complements: empty, finite, eventually periodic."""
    return {
        "empty": CodedSet(Schedule.finite({})),
        "finite": CodedSet(Schedule.finite({0: 3, 2: 5, 3: 0, 7: 3, 9: 12, 11: 1})),
        "periodic": CodedSet(Schedule.periodic([2, None, 7], stride=5,
                                               prefix={0: 1, 2: 4}, start=4)),
    }


def random_presentation(rng: random.Random, max_gens: int = 3, max_rels: int = 3,
                        max_len: int = 6) -> Presentation:
    pool = ["a", "b", "c", "d"]
    gens = tuple(pool[: rng.randint(1, max_gens)])
    rels = []
    for _ in range(rng.randint(0, max_rels)):
        n = rng.randint(1, max_len)
        rels.append(Word(tuple(Letter(rng.choice(gens), None, rng.choice((1, -1)))
                               for _ in range(n))))
    return Presentation(gens, tuple(rels))


def random_matrix(rng: random.Random, max_dim: int = 6, bound: int = 20,
                  square: Optional[bool] = None) -> list:
    m = rng.randint(1, max_dim)
    n = m if square else rng.randint(1, max_dim)
    return [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(m)]
