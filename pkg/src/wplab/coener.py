"""Step enumerators for co-c.e. sets and the injective coder built from them.

A step enumerator says, for each step ``t``, either nothing or a single
output value. It stands in for the enumeration of a c.e. set: "step t emits
v" plays the role of a halting computation found at stage t.

Enumerators backed by an explicit schedule (finite, or eventually periodic
with an arithmetic drift) also answer ``emits(v)`` and ``first_step(v)``
exactly. Those answers exist only for test instrumentation; the word-problem
decider never sees them, only oracle answers.
"""
from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

__all__ = [
    "ScheduleUnavailable",
    "StepEnumerator",
    "Schedule",
    "FunctionEnumerator",
    "Padded",
    "Deduped",
    "InjectiveCoder",
    "CodedSet",
    "Membership",
    "pad_to_infinite",
    "dedup",
    "build_g",
    "coded_complement_member",
    "parse_schedule",
]


class ScheduleUnavailable(RuntimeError):
    """Exact membership was requested from an enumerator without a full schedule."""


class StepEnumerator:
    def at(self, t: int) -> Optional[int]:
        raise NotImplementedError

    @property
    def exact(self) -> bool:
        return False

    def emits(self, v: int) -> bool:
        raise ScheduleUnavailable(f"{self!r} has no full emission schedule")

    def first_step(self, v: int) -> Optional[int]:
        raise ScheduleUnavailable(f"{self!r} has no full emission schedule")

    def prefix(self, steps: int) -> list:
        return [self.at(t) for t in range(steps)]


@dataclass(frozen=True)
class Schedule(StepEnumerator):
    """An explicit schedule.

    Steps below ``start`` are read from ``table``. From ``start`` on, the
    ``pattern`` repeats; on the q-th repetition an entry ``p`` emits
    ``p + q * stride`` (``None`` entries are silent). With no pattern the
    schedule is finite.
    """

    table: Mapping[int, int] = field(default_factory=dict)
    start: int = 0
    pattern: tuple = ()
    stride: int = 0

    def __post_init__(self):
        object.__setattr__(self, "table", dict(self.table))
        object.__setattr__(self, "pattern", tuple(self.pattern))
        if self.pattern:
            if any(t >= self.start for t in self.table):
                raise ValueError("table steps must precede the periodic tail")
        else:
            object.__setattr__(self, "start", max(self.table, default=-1) + 1)
        if self.stride < 0:
            raise ValueError("stride must be nonnegative")
        values = list(self.table.values()) + [p for p in self.pattern if p is not None]
        if any(v < 0 for v in values) or any(t < 0 for t in self.table):
            raise ValueError("steps and values must be nonnegative")

    @classmethod
    def finite(cls, table: Mapping[int, int]) -> "Schedule":
        return cls(table)

    @classmethod
    def periodic(cls, pattern: Sequence[Optional[int]], stride: int = 0,
                 prefix: Optional[Mapping[int, int]] = None, start: Optional[int] = None) -> "Schedule":
        prefix = dict(prefix or {})
        if start is None:
            start = max(prefix, default=-1) + 1
        return cls(prefix, start, tuple(pattern), stride)

    def at(self, t: int) -> Optional[int]:
        if t < self.start or not self.pattern:
            return self.table.get(t)
        q, j = divmod(t - self.start, len(self.pattern))
        p = self.pattern[j]
        return None if p is None else p + q * self.stride

    @property
    def exact(self) -> bool:
        return True

    def first_step(self, v: int) -> Optional[int]:
        best = min((t for t, u in self.table.items() if u == v), default=None)
        if best is not None:
            return best
        period = len(self.pattern)
        for j, p in enumerate(self.pattern):
            if p is None or v < p:
                continue
            if self.stride == 0:
                q = 0 if v == p else None
            else:
                q = (v - p) // self.stride if (v - p) % self.stride == 0 else None
            if q is not None:
                t = self.start + q * period + j
                best = t if best is None else min(best, t)
        return best

    def emits(self, v: int) -> bool:
        return self.first_step(v) is not None


class FunctionEnumerator(StepEnumerator):
    """Wrap an arbitrary ``step -> value or None`` function. Not exact."""

    def __init__(self, func: Callable[[int], Optional[int]], name: str = "e"):
        self.func = func
        self.name = name

    def at(self, t: int) -> Optional[int]:
        return self.func(t)

    def __repr__(self) -> str:
        return f"FunctionEnumerator({self.name!r})"


class Padded(StepEnumerator):
    """Even steps 2t carry ``2 * e(t)``; odd steps 2t+1 emit 2t+1."""

    def __init__(self, inner: StepEnumerator):
        self.inner = inner

    def at(self, t: int) -> Optional[int]:
        if t & 1:
            return t
        v = self.inner.at(t >> 1)
        return None if v is None else 2 * v

    @property
    def exact(self) -> bool:
        return self.inner.exact

    def first_step(self, v: int) -> Optional[int]:
        if v & 1:
            return v
        s = self.inner.first_step(v >> 1)
        return None if s is None else 2 * s

    def emits(self, v: int) -> bool:
        return self.first_step(v) is not None

    def __repr__(self) -> str:
        return f"Padded({self.inner!r})"


class Deduped(StepEnumerator):
    """Drop every emission of a value already emitted at an earlier step."""

    def __init__(self, inner: StepEnumerator):
        self.inner = inner
        self._first: dict = {}
        self._scanned = 0
        self._lock = threading.Lock()

    def _scan_to(self, t: int):
        with self._lock:
            while self._scanned <= t:
                v = self.inner.at(self._scanned)
                if v is not None:
                    self._first.setdefault(v, self._scanned)
                self._scanned += 1

    def at(self, t: int) -> Optional[int]:
        v = self.inner.at(t)
        if v is None:
            return None
        if self.inner.exact:
            return v if self.inner.first_step(v) == t else None
        self._scan_to(t)
        return v if self._first[v] == t else None

    @property
    def exact(self) -> bool:
        return self.inner.exact

    def first_step(self, v: int) -> Optional[int]:
        return self.inner.first_step(v)

    def emits(self, v: int) -> bool:
        return self.inner.emits(v)

    def __repr__(self) -> str:
        return f"Deduped({self.inner!r})"


def pad_to_infinite(e: StepEnumerator) -> Padded:
    return Padded(e)


def dedup(e: StepEnumerator) -> Deduped:
    return e if isinstance(e, Deduped) else Deduped(e)


# -- the coder ---------------------------------------------------------------

class InjectiveCoder:
    """``g(t) = 2v`` if step t emits v, else ``2t + 1``.

    Injective when the enumerator never repeats a value: even outputs come
    from distinct emissions, odd outputs from distinct steps.
    """

    def __init__(self, e: StepEnumerator):
        self.e = e

    def __call__(self, t: int) -> int:
        v = self.e.at(t)
        return 2 * t + 1 if v is None else 2 * v

    g = __call__

    def graph(self, t: int, v: int) -> bool:
        """Decide ``g(t) == v`` with a single step query."""
        if v < 0:
            return False
        if v & 1:
            return v == 2 * t + 1 and self.e.at(t) is None
        return self.e.at(t) == v >> 1

    def inverse(self, v: int) -> Optional[int]:
        """The ``t`` with ``g(t) == v``, or ``None``; exact schedules only."""
        if v < 0:
            return None
        if v & 1:
            t = (v - 1) >> 1
            return t if self.e.at(t) is None else None
        return self.e.first_step(v >> 1)

    def inverse_within(self, v: int, step_bound: int) -> Optional[int]:
        if v < 0:
            return None
        if v & 1:
            t = (v - 1) >> 1
            return t if self.e.at(t) is None else None
        for t in range(step_bound + 1):
            if self.e.at(t) == v >> 1:
                return t
        return None

    def in_range(self, v: int) -> bool:
        return self.inverse(v) is not None


def build_g(e: StepEnumerator) -> InjectiveCoder:
    """Coder for an already deduplicated enumerator."""
    return InjectiveCoder(e)


class Membership(enum.Enum):
    YES = "yes"
    NO = "no"
    NO_WITHIN_BOUND = "no-within-bound"


def coded_complement_member(g: InjectiveCoder, v: int, step_bound: int) -> Membership:
    """Is ``v`` in the range of ``g``? Odd ``v`` is exact; even ``v`` is semi-decided."""
    if v < 0:
        return Membership.NO
    if v & 1:
        return Membership.YES if g.inverse_within(v, step_bound) is not None else Membership.NO
    if g.inverse_within(v, step_bound) is not None:
        return Membership.YES
    return Membership.NO_WITHIN_BOUND


class CodedSet:
    """The padded set coded by an enumerator of its complement.

    ``raw`` enumerates the complement of the original set. After padding and
    deduplication the coder ``g`` has range equal to the complement of the
    coded set; ``contains`` and ``in_complement`` are exact when ``raw`` is
    schedule-backed.
    """

    def __init__(self, raw: StepEnumerator):
        self.raw = raw
        self.enumerator = dedup(pad_to_infinite(raw))
        self.g = build_g(self.enumerator)

    @property
    def exact(self) -> bool:
        return self.enumerator.exact

    def in_complement(self, v: int) -> bool:
        if not self.exact:
            raise ScheduleUnavailable("coded set has no full emission schedule")
        return self.g.in_range(v)

    def contains(self, v: int) -> bool:
        return not self.in_complement(v)

    def __repr__(self) -> str:
        return f"CodedSet({self.raw!r})"


def parse_schedule(text: str) -> tuple:
    """Load ``t v`` lines into a finite :class:`Schedule`.

    Repeated values are dropped (only the earliest step keeps its emission).
    Returns ``(schedule, dropped)`` with ``dropped`` the removed ``(t, v)``.
    """
    table: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ValueError(f"line {lineno}: expected 't v', got {raw!r}")
        t, v = map(int, parts)
        if t in table and table[t] != v:
            raise ValueError(f"line {lineno}: step {t} already emits {table[t]}")
        table[t] = v
    seen: set = set()
    kept: dict = {}
    dropped: list = []
    for t in sorted(table):
        v = table[t]
        if v in seen:
            dropped.append((t, v))
        else:
            seen.add(v)
            kept[t] = v
    return Schedule.finite(kept), dropped
