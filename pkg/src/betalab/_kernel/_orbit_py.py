"""Pure Python digit-orbit kernel.

The kernel iterates the map  r -> beta*r - floor(beta*r)  on remainders
represented as integer coordinate vectors over the power basis with one
fixed denominator (the map is integer-linear in the numerators, so the
denominator never changes along an orbit).

Digits are extracted with a guarded float floor: the numerator is summed
against precomputed float powers of beta and the result trusted only when
the rigorous rounding-error bound keeps it away from an integer; otherwise
an exact fallback provided by the caller decides.  Orbits terminate on the
zero vector (finite expansion) or are folded by Brent's cycle detection,
which needs O(1) extra memory and no state hashing.

This module is the reference twin; the compiled twin mirrors it with
int64 arithmetic and raises KernelRange when a value would not fit,
at which point the dispatcher retries here with arbitrary precision.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

from ..errors import StateBudgetError


class KernelRange(Exception):
    """Raised by the compiled twin when int64 arithmetic would overflow."""


# relative float error per fused multiply-add, with headroom
_EPS = 2.3e-16


class PureKernel:
    name = "pure"

    def __init__(self, m: int, rec: Sequence[int], beta: float, digit_max: int,
                 exact_floor: Callable[[tuple[int, ...], int], int],
                 inv_row: Sequence[int] | None):
        self.m = m
        self.rec = tuple(rec)                     # beta^m = sum rec[j-1] beta^(m-j)
        self.digit_max = digit_max
        self.exact_floor = exact_floor
        self.inv_row = tuple(inv_row) if inv_row is not None else None
        self.beta_pows = [beta ** i for i in range(m)]

    # -- single orbit step -------------------------------------------------------

    def _step(self, u: tuple[int, ...], den: int) -> tuple[tuple[int, ...], int]:
        """Apply r -> beta*r - digit; return (new numerators, digit)."""
        m, rec = self.m, self.rec
        top = u[m - 1]
        v = [0] * m
        v[0] = top * rec[m - 1]
        for i in range(1, m):
            v[i] = u[i - 1] + top * rec[m - 1 - i]
        digit = self._floor_value(v, den)
        if digit < 0 or digit > self.digit_max:
            raise ValueError(f"digit {digit} outside [0, {self.digit_max}]: "
                             "orbit input was not a remainder in [0, 1]")
        v[0] -= digit * den
        return tuple(v), digit

    def _floor_value(self, nums: Sequence[int], den: int) -> int:
        try:
            total = 0.0
            absum = 0.0
            for a, p in zip(nums, self.beta_pows):
                total += a * p
                absum += abs(a) * p
            err = absum * (self.m + 3) * _EPS / den
            y = total / den
            lo = math.floor(y - err)
            hi = math.floor(y + err)
        except OverflowError:
            return self.exact_floor(tuple(nums), den)
        if lo == hi:
            return lo
        return self.exact_floor(tuple(nums), den)

    # -- full orbit with cycle structure ------------------------------------------

    def orbit(self, nums: Sequence[int], den: int, max_steps: int = 1_000_000
              ) -> tuple[list[int], int, int]:
        """Greedy digit orbit of (nums)/den.

        Returns (digits, mu, lam): the first mu + lam digits, preperiod
        length mu and cycle length lam; lam == 0 means the orbit reached
        zero and ``digits`` is the whole finite expansion.
        """
        zero = (0,) * self.m
        start = tuple(nums)
        if start == zero:
            return [], 0, 0

        # Brent: find cycle length lam, watching for the zero absorbing state
        steps = 0
        power = lam = 1
        tortoise = start
        hare, _ = self._step(start, den)
        while hare != tortoise:
            if hare == zero:
                return self._replay_finite(start, den, max_steps)
            if power == lam:
                tortoise = hare
                power *= 2
                lam = 0
            hare, _ = self._step(hare, den)
            lam += 1
            steps += 1
            if steps > max_steps:
                raise StateBudgetError(f"orbit exceeded {max_steps} steps")

        # find preperiod mu
        tortoise = hare = start
        for _ in range(lam):
            hare, _ = self._step(hare, den)
        mu = 0
        while tortoise != hare:
            tortoise, _ = self._step(tortoise, den)
            hare, _ = self._step(hare, den)
            mu += 1

        digits = []
        state = start
        for _ in range(mu + lam):
            state, d = self._step(state, den)
            digits.append(d)
        return digits, mu, lam

    def _replay_finite(self, start: tuple[int, ...], den: int, max_steps: int
                       ) -> tuple[list[int], int, int]:
        zero = (0,) * self.m
        digits = []
        state = start
        while state != zero:
            if len(digits) > max_steps:
                raise StateBudgetError(f"orbit exceeded {max_steps} steps")
            state, d = self._step(state, den)
            digits.append(d)
        return digits, len(digits), 0

    # -- finiteness probe for digit prefixes ----------------------------------------

    def divide_by_beta(self, u: Sequence[int]) -> tuple[int, ...]:
        """u / beta for integer vectors; defined when the base is a unit."""
        if self.inv_row is None:
            raise ValueError("division by beta needs a unit base")
        m = self.m
        t = u[0]
        out = [u[i + 1] for i in range(m - 1)] + [0]
        if t:
            for i in range(m):
                out[i] += t * self.inv_row[i]
        return tuple(out)

    def is_finite(self, nums: Sequence[int], den: int, max_steps: int = 1_000_000) -> bool:
        """Does the orbit of (nums)/den reach zero?"""
        zero = (0,) * self.m
        start = tuple(nums)
        if start == zero:
            return True
        steps = 0
        power = lam = 1
        tortoise = start
        hare, _ = self._step(start, den)
        while hare != tortoise:
            if hare == zero:
                return True
            if power == lam:
                tortoise = hare
                power *= 2
                lam = 0
            hare, _ = self._step(hare, den)
            lam += 1
            steps += 1
            if steps > max_steps:
                raise StateBudgetError(f"orbit exceeded {max_steps} steps")
        return False

    def first_finite_prefix(self, digits: Sequence[int], scale_nums: Sequence[int],
                            den: int, max_steps: int = 1_000_000) -> int:
        """Smallest k >= 1 such that scale * sum_{i<=k} x_i beta^-i has a
        finite greedy expansion, or -1 if no prefix of ``digits`` does.
        ``scale_nums`` is the integer coordinate vector of scale * den.
        """
        m = self.m
        p = tuple(scale_nums)           # scale * beta^{-k} numerators
        v = (0,) * m
        for k, x in enumerate(digits, start=1):
            p = self.divide_by_beta(p)
            if x:
                x = int(x)  # keep arbitrary precision if digits is a numpy array
                v = tuple(v[i] + x * p[i] for i in range(m))
            if self.is_finite(v, den, max_steps):
                return k
        return -1

    def finite_within(self, nums: Sequence[int], den: int, bound: int) -> int:
        """Public wrapper over :meth:`_finite_within`."""
        return self._finite_within(tuple(int(n) for n in nums), den, bound)

    def _finite_within(self, nums: tuple[int, ...], den: int, bound: int) -> int:
        """Length of the expansion of (nums)/den if it terminates within
        ``bound`` digits, else -1."""
        zero = (0,) * self.m
        state = tuple(nums)
        steps = 0
        while state != zero:
            if steps >= bound:
                return -1
            state, _ = self._step(state, den)
            steps += 1
        return steps

    def stream_values(self, row: Sequence[int], scale_nums: Sequence[int],
                      den: int, K: int, n0: int, n_out: int
                      ) -> tuple[bool, float, float]:
        """Blockwise-normalize a digit stream and read off two float values.

        Scans ``row`` (positions 1, 2, ...) with the standard cut rule: a
        block closes at n+K once the scaled value of the block content up
        to n expands finitely within the padded block length and the next
        2K stream digits are zero.  Normalized digits land at the block's
        own positions; the returned values are

            sum_j eps_{n0+j}   * beta^-j   and   sum_j eps_{n0+1+j} * beta^-j

        for j = 1..n_out (an estimate window and its one-shift slice).
        Returns (False, 0, 0) when the row is exhausted before the window
        is covered.
        """
        m = self.m
        binv = 1.0 / (self.beta_pows[1] if m > 1 else 1.0)
        binv_pows = [0.0] * (n_out + 2)
        acc = 1.0
        for j in range(1, n_out + 2):
            acc *= binv
            binv_pows[j] = acc
        val = 0.0
        val_shift = 0.0
        total = len(row)
        s = 1                                # current block start
        p = tuple(scale_nums)
        v = (0,) * m
        k = 1
        while True:
            if s > n0 + n_out + 1:
                return True, val, val_shift
            if k > total:
                return False, 0.0, 0.0
            p = self.divide_by_beta(p)
            x = int(row[k - 1])
            if x:
                v = tuple(v[i] + x * p[i] for i in range(m))
            # cut candidate: 2K zeros ahead, then block content expands
            # finitely inside the padded length
            if k + 2 * K <= total and all(row[j] == 0 for j in range(k, k + 2 * K)):
                fit = k - s + 1 + K
                lam = self._finite_within(v, den, fit)
                if lam >= 0:
                    state = v
                    for j in range(1, lam + 1):
                        state, dig = self._step(state, den)
                        if dig:
                            pos = s - 1 + j
                            if n0 < pos <= n0 + n_out:
                                val += dig * binv_pows[pos - n0]
                            if n0 + 1 < pos <= n0 + 1 + n_out:
                                val_shift += dig * binv_pows[pos - n0 - 1]
                    s = k + K + 1
                    k = k + K + 1
                    p = tuple(scale_nums)
                    v = (0,) * m
                    continue
            k += 1
