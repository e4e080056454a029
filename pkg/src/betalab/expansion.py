"""Greedy digit expansions, admissibility, values, and orbit attractors.

The greedy expansion of x in [0, 1) iterates  x -> beta*x - floor(beta*x)
and reads the floors as digits.  For elements of Q(beta) with beta a Pisot
number the orbit is eventually periodic, so every expansion is returned as
a canonical (preperiod, period) pair; the admissibility reference is the
quasi-greedy expansion of 1, against which every tail of a valid expansion
must be lexicographically strictly smaller.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NotInUnitIntervalError, StateBudgetError
from .field import FieldElement, PisotBase
from .words import PeriodicWord, compare_streams


def _as_element(base: PisotBase, x) -> FieldElement:
    if isinstance(x, FieldElement):
        if x.base is not base:
            from .errors import MixedBasesError
            raise MixedBasesError("element belongs to a different base")
        return x
    return base.from_rational(Fraction(x))


def _orbit_word(digits: list[int], mu: int, lam: int) -> PeriodicWord:
    if lam == 0:
        return PeriodicWord.finite(digits)
    return PeriodicWord(digits[:mu], digits[mu : mu + lam])


def greedy_expand(base: PisotBase, x, max_states: int = 100_000) -> PeriodicWord:
    """Greedy expansion of x in [0, 1), exact and canonical.

    Raises NotInUnitIntervalError outside the unit interval and
    StateBudgetError if cycle detection exceeds ``max_states`` steps.
    """
    el = _as_element(base, x)
    if el.sign() < 0 or el.compare(1) >= 0:
        raise NotInUnitIntervalError("greedy expansion needs 0 <= x < 1")
    nums, den = el.numerator_vector()
    digits, mu, lam = base.kernel.orbit(nums, den, max_states)
    return _orbit_word(digits, mu, lam)


def quasi_greedy_one(base: PisotBase) -> PeriodicWord:
    """The quasi-greedy expansion of 1: the lexicographically largest
    admissible sequence, which bounds every expansion tail from above.

    Computed from the greedy orbit of 1; when that orbit terminates (the
    expansion of 1 is finite, say t_1..t_k), the quasi-greedy form is the
    purely periodic word (t_1 .. t_{k-1} (t_k - 1)) repeated.
    """
    one = (1,) + (0,) * (base.degree - 1)
    digits, mu, lam = base.kernel.orbit(one, 1)
    if lam == 0:
        head = digits[:-1] + [digits[-1] - 1]
        return PeriodicWord((), head)
    return _orbit_word(digits, mu, lam)


def word_value(base: PisotBase, w: PeriodicWord | Sequence[int]) -> FieldElement:
    """Exact value sum_n w_n beta^(-n) of a digit stream.

    The periodic tail is summed in closed form: a block of value V repeating
    with period length p from position mu+1 contributes
    beta^(-mu) * V / (1 - beta^(-p)).
    """
    if not isinstance(w, PeriodicWord):
        w = PeriodicWord.finite(w)
    binv = base.beta_element().inverse()
    total = base.zero()
    p = base.one()
    for digit in w.pre:
        p = p * binv
        if digit:
            total = total + digit * p
    if w.per:
        block = base.zero()
        q = p
        for digit in w.per:
            q = q * binv
            if digit:
                block = block + digit * q
        lam = len(w.per)
        total = total + block * (base.one() - binv ** lam).inverse()
    return total


def is_admissible(base: PisotBase, w: PeriodicWord | Sequence[int]) -> bool:
    """Parry condition: every tail of the stream is strictly below the
    quasi-greedy expansion of 1."""
    if not isinstance(w, PeriodicWord):
        w = PeriodicWord.finite(w)
    reference = base.one_expansion
    tails = w.preperiod_length + max(1, w.period_length)
    return all(
        compare_streams(w.shift(k), reference) < 0 for k in range(tails)
    )


# ---------------------------------------------------------------------------
# orbit attractor on a rational sublattice
# ---------------------------------------------------------------------------


def attractor_periods(base: PisotBase, denominator: int = 1,
                      budget: int = 2_000_000) -> frozenset[PeriodicWord]:
    """All purely periodic tails of greedy expansions of points of
    (1/denominator) Z[beta] in [0, 1), canonicalized to the smallest
    rotation; the empty period (finite expansions) is always included.

    Cycle remainders r satisfy |conj_j(r)| <= [beta] / (1 - |conj_j(beta)|)
    for every non-dominant embedding (iterate the triangle inequality
    around the cycle), so integer coordinate candidates live in the box
    obtained by applying the inverse embedding matrix to these bounds, with
    10% slack; candidates are filtered exactly and orbit-walked.
    """
    cached = base._attractors.get(denominator)
    if cached is not None:
        return cached

    m = base.degree
    beta = base.beta_float()
    roots = [complex(beta, 0.0)] + [z for z, _ in base.conjugates]
    row_bounds = [1.0 * denominator]
    for z, rad in base.conjugates:
        mod = abs(z) + rad
        row_bounds.append(denominator * base.digit_bound / (1.0 - mod))
    vander = np.array([[r ** i for i in range(m)] for r in roots], dtype=complex)
    inv = np.linalg.inv(vander)
    limits = []
    for i in range(m):
        bound = sum(abs(inv[i, j]) * row_bounds[j] for j in range(m))
        limits.append(int(bound * 1.1) + 1)

    total = 1
    for lim in limits:
        total *= 2 * lim + 1
    if total > budget:
        raise StateBudgetError(
            f"attractor candidate box has {total} points (budget {budget})"
        )

    one = base.one()
    periods: set[PeriodicWord] = {PeriodicWord.zero()}
    for u in itertools.product(*(range(-lim, lim + 1) for lim in limits)):
        if not any(u):
            continue
        el = base.element([Fraction(c, denominator) for c in u])
        if el.sign() < 0 or el.compare(one) >= 0:
            continue
        digits, mu, lam = base.kernel.orbit(tuple(u), denominator)
        if lam:
            periods.add(PeriodicWord((), canonical_rotation(digits[mu : mu + lam])))

    result = frozenset(periods)
    base._attractors[denominator] = result
    return result


def canonical_rotation(per: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically smallest rotation of a period tuple."""
    per = tuple(per)
    if not per:
        return per
    return min(per[i:] + per[:i] for i in range(len(per)))
