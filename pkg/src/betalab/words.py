"""Eventually periodic digit streams in canonical form.

A :class:`PeriodicWord` models an infinite one-sided digit sequence
``x_1 x_2 x_3 ...`` that is eventually periodic, stored as a preperiod
tuple and a (possibly empty) period tuple.  The empty period means the
stream ends in zeros, i.e. the expansion is finite.

Canonical form makes equality of streams structural:

* an all-zero period is replaced by the empty period,
* trailing zeros of a finite preperiod are stripped,
* the period is primitive (not a repetition of a shorter word),
* the preperiod is as short as possible (cycle rolled back while the
  last preperiod digit matches the last period digit).
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .errors import DigitOutOfRangeError


def _primitive_period(per: tuple[int, ...]) -> tuple[int, ...]:
    """Shortest word whose repetition gives ``per`` (failure function)."""
    n = len(per)
    fail = [0] * (n + 1)
    k = 0
    for i in range(1, n):
        while k and per[i] != per[k]:
            k = fail[k]
        if per[i] == per[k]:
            k += 1
        fail[i + 1] = k
    p = n - fail[n]
    return per[:p] if n % p == 0 else per


class PeriodicWord:
    __slots__ = ("pre", "per")

    def __init__(self, pre: Sequence[int] = (), per: Sequence[int] = ()):
        pre = tuple(int(x) for x in pre)
        per = tuple(int(x) for x in per)
        if any(x < 0 for x in pre) or any(x < 0 for x in per):
            raise DigitOutOfRangeError("digits must be non-negative")
        if not any(per):
            per = ()
            while pre and pre[-1] == 0:
                pre = pre[:-1]
        else:
            per = _primitive_period(per)
            while pre and pre[-1] == per[-1]:
                per = (per[-1],) + per[:-1]
                pre = pre[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)

    def __setattr__(self, name, value):
        raise AttributeError("PeriodicWord is immutable")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def finite(cls, digits: Iterable[int]) -> "PeriodicWord":
        return cls(tuple(digits), ())

    @classmethod
    def zero(cls) -> "PeriodicWord":
        return cls((), ())

    # -- structure ------------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return not self.per

    @property
    def preperiod_length(self) -> int:
        return len(self.pre)

    @property
    def period_length(self) -> int:
        return len(self.per)

    @property
    def max_digit(self) -> int:
        return max(max(self.pre, default=0), max(self.per, default=0))

    def digit(self, i: int) -> int:
        """Digit x_{i+1} (0-indexed position in the stream)."""
        if i < 0:
            raise IndexError("stream positions start at 0")
        if i < len(self.pre):
            return self.pre[i]
        if not self.per:
            return 0
        return self.per[(i - len(self.pre)) % len(self.per)]

    def prefix(self, n: int) -> tuple[int, ...]:
        return tuple(self.digit(i) for i in range(n))

    def shift(self, k: int = 1) -> "PeriodicWord":
        """Drop the first k digits."""
        if k <= len(self.pre):
            return PeriodicWord(self.pre[k:], self.per)
        if not self.per:
            return PeriodicWord.zero()
        r = (k - len(self.pre)) % len(self.per)
        return PeriodicWord((), self.per[r:] + self.per[:r])

    # -- comparisons ------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, PeriodicWord):
            return NotImplemented
        return self.pre == other.pre and self.per == other.per

    def __hash__(self):
        return hash((self.pre, self.per))

    def __repr__(self):
        if self.is_finite:
            return f"PeriodicWord({list(self.pre)})"
        return f"PeriodicWord({list(self.pre)}, per={list(self.per)})"

    # -- serialization ------------------------------------------------------------

    def as_dict(self) -> dict:
        return {"pre": list(self.pre), "per": list(self.per)}

    @classmethod
    def from_dict(cls, data: dict) -> "PeriodicWord":
        return cls(tuple(data.get("pre", ())), tuple(data.get("per", ())))


def compare_streams(a: PeriodicWord, b: PeriodicWord) -> int:
    """Lexicographic comparison of the underlying infinite streams.

    Two eventually periodic streams that agree through
    ``max(preperiods) + lcm(periods)`` positions agree everywhere.
    """
    la = len(a.per) or 1
    lb = len(b.per) or 1
    horizon = max(len(a.pre), len(b.pre)) + math.lcm(la, lb) + 1
    for i in range(horizon):
        da, db = a.digit(i), b.digit(i)
        if da != db:
            return -1 if da < db else 1
    return 0


def lex_less(a: PeriodicWord, b: PeriodicWord) -> bool:
    return compare_streams(a, b) < 0
