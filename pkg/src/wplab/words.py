"""Free-group words over an indexed alphabet.

A word is a finite sequence of signed letters; letters may carry an integer
index so that families such as ``b[3]`` coexist with the plain ``b``.
Parsing keeps the text exactly as written; every algebraic operation
returns a freely reduced word.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Optional, Protocol, Union

__all__ = [
    "Letter",
    "Word",
    "WordSyntaxError",
    "UnboundGeneratorError",
    "parse_word",
    "format_word",
    "free_reduce",
    "multiply",
    "invert",
    "power",
    "conjugate",
    "commutator",
    "exponent_sum",
    "separator_membership",
    "evaluate_hom",
    "gen",
]

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class WordSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


class UnboundGeneratorError(KeyError):
    pass


@dataclass(frozen=True)
class Letter:
    base: str
    index: Optional[int] = None
    sign: int = 1

    def __post_init__(self):
        if not self.base:
            raise ValueError("letter base must be nonempty")
        if self.sign not in (1, -1):
            raise ValueError(f"letter sign must be +1 or -1, got {self.sign}")

    @property
    def key(self) -> Union[str, tuple]:
        """Generator identity, ignoring the sign."""
        return self.base if self.index is None else (self.base, self.index)

    def inverse(self) -> "Letter":
        return Letter(self.base, self.index, -self.sign)

    def cancels(self, other: "Letter") -> bool:
        return (
            self.base == other.base
            and self.index == other.index
            and self.sign == -other.sign
        )

    def __str__(self) -> str:
        s = self.base if self.index is None else f"{self.base}[{self.index}]"
        return s if self.sign == 1 else s + "^-1"


@dataclass(frozen=True)
class Word:
    letters: tuple = ()

    def __post_init__(self):
        if not isinstance(self.letters, tuple):
            object.__setattr__(self, "letters", tuple(self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __pow__(self, k: int) -> "Word":
        return power(self, k)

    def inverse(self) -> "Word":
        return invert(self)

    def is_reduced(self) -> bool:
        return all(not a.cancels(b) for a, b in zip(self.letters, self.letters[1:]))

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


EMPTY = Word(())


def gen(base: str, index: Optional[int] = None, sign: int = 1) -> Word:
    """One-letter word."""
    return Word((Letter(base, index, sign),))


# -- parsing -----------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise WordSyntaxError(msg, self.text, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self) -> int:
        self.skip_ws()
        m = re.compile(r"[+-]?\d+").match(self.text, self.pos)
        if not m:
            self.error("expected integer")
        self.pos = m.end()
        return int(m.group())

    def word(self) -> list:
        letters: list = []
        while True:
            c = self.peek()
            if c == "" or c == ")":
                return letters
            letters.extend(self.factor())

    def factor(self) -> list:
        c = self.peek()
        if c == "(":
            self.pos += 1
            body = self.word()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
        else:
            m = _NAME_RE.match(self.text, self.pos)
            if not m:
                self.error(f"unexpected character {c!r}")
            self.pos = m.end()
            index = None
            # the index bracket must follow the name directly
            if self.pos < len(self.text) and self.text[self.pos] == "[":
                self.pos += 1
                index = self.integer()
                if self.peek() != "]":
                    self.error("expected ']'")
                self.pos += 1
            body = [Letter(m.group(), index, 1)]
        if self.peek() == "^":
            self.pos += 1
            k = self.integer()
            return _power_letters(body, k)
        return body


def _power_letters(body: list, k: int) -> list:
    if k < 0:
        body = [l.inverse() for l in reversed(body)]
        k = -k
    return body * k


def parse_word(text: str) -> Word:
    """Parse ``text`` into a word, keeping the letters exactly as written.

    ``"1"`` on its own denotes the empty word. Exponents expand eagerly;
    negative exponents invert the factor.

    >>> parse_word("a b^-1 a")
    Word('a b^-1 a')
    >>> parse_word("b[3]^2").letters == (Letter("b", 3), Letter("b", 3))
    True
    """
    if text.strip() == "1":
        return EMPTY
    p = _Parser(text)
    letters = p.word()
    if p.peek() != "":
        p.error("unbalanced ')'")
    return Word(tuple(letters))


def format_word(w: Word) -> str:
    """Canonical text: one factor per run of equal letters, ``1`` if empty."""
    if not w.letters:
        return "1"
    out = []
    i = 0
    letters = w.letters
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        l = letters[i]
        atom = l.base if l.index is None else f"{l.base}[{l.index}]"
        k = (j - i) * l.sign
        out.append(atom if k == 1 else f"{atom}^{k}")
        i = j
    return " ".join(out)


# -- free group operations ---------------------------------------------------

def free_reduce(w: Union[Word, Iterable[Letter]]) -> Word:
    stack: list = []
    for l in w:
        if stack and stack[-1].cancels(l):
            stack.pop()
        else:
            stack.append(l)
    return Word(tuple(stack))


def multiply(*words: Word) -> Word:
    return free_reduce(l for w in words for l in w.letters)


def invert(w: Word) -> Word:
    return Word(tuple(l.inverse() for l in reversed(w.letters)))


def power(w: Word, k: int) -> Word:
    w = free_reduce(w)
    if k < 0:
        w, k = invert(w), -k
    return free_reduce(w.letters * k)


def conjugate(u: Word, t: Word) -> Word:
    """``t^-1 u t``."""
    return multiply(invert(t), u, t)


def commutator(u: Word, v: Word) -> Word:
    """``u^-1 v^-1 u v``."""
    return multiply(invert(u), invert(v), u, v)


def exponent_sum(w: Word, base: str, index: Optional[int] = None) -> int:
    return sum(l.sign for l in w.letters if l.base == base and l.index == index)


def separator_membership(w: Word, v: str, index: Optional[int] = None) -> bool:
    """Membership in the subgroup of words whose ``v``-exponent sum vanishes."""
    return exponent_sum(w, v, index) == 0


# -- homomorphic evaluation --------------------------------------------------

class Target(Protocol):
    def identity(self) -> Any: ...

    def multiply(self, a: Any, b: Any) -> Any: ...

    def invert(self, a: Any) -> Any: ...


def evaluate_hom(w: Word, assignment: Mapping[Any, Any], target: Target) -> Any:
    """Image of ``w`` under the homomorphism fixed by ``assignment``.

    Keys are generator names, or ``(name, index)`` pairs for indexed letters.
    Products are folded left to right with ``target.multiply``. If the target
    has a ``power(a, k)`` method, runs of one letter go through it.
    """
    power_of = getattr(target, "power", None)
    result = target.identity()
    letters = w.letters
    i = 0
    while i < len(letters):
        l = letters[i]
        try:
            g = assignment[l.key]
        except KeyError:
            raise UnboundGeneratorError(f"generator {l.key!r} has no image") from None
        j = i + 1
        if power_of is not None:
            while j < len(letters) and letters[j] == l:
                j += 1
        k = (j - i) * l.sign
        if k == 1:
            pass
        elif power_of is not None:
            g = power_of(g, k)
        else:
            g = target.invert(g)
        result = target.multiply(result, g)
        i = j
    return result
