"""Weak-finitarity checks: period killers, the repair bound L, and the
exponential-decay experiment for the fraction of unfinished prefixes.

A base is weakly finitary on its attractor when every purely periodic
tail that greedy expansions can fall into admits a *killer*: a small
correction after which the expansion terminates.  Killers come in two
forms here:

* additive — a beta-admissible word ``f`` with exact value in (0, delta)
  such that ``greedy_expand(y + value(f))`` is finite, where ``y`` is the
  value of the periodic tail.  This only makes sense for tails with
  ``y`` in Z[beta]: over a unit base every finite greedy expansion has
  value in Z[beta], so a tail outside that lattice can never be repaired
  by adding a finite word.
* digit-suffix — for tails living in a strictly finer lattice (e.g. the
  odd half-integer classes that appear when d - 1 does not divide the
  scale away), a continuation of the *stream* works instead: appending
  digits moves the scaled value between lattice classes, and a short
  suffix lands it in the class whose attractor is {0}.

Both forms carry enough data to be re-verified from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Union

import numpy as np

from .errors import SearchExhaustedError
from .expansion import (attractor_periods, canonical_rotation, greedy_expand,
                        is_admissible, word_value)
from .field import FieldElement, PisotBase
from .normalize import estimate_K, normalize_finite
from .rng import rng_for
from .words import PeriodicWord


@dataclass(frozen=True)
class KillerCertificate:
    """An additive repair for one periodic tail value."""
    y: FieldElement
    delta: FieldElement
    f: tuple[int, ...]
    proof: PeriodicWord

    def verify(self, base: PisotBase) -> bool:
        """Recompute every claim from scratch; True iff all hold."""
        if not is_admissible(base, self.f):
            return False
        v = word_value(base, self.f)
        if v.sign() <= 0 or v.compare(self.delta) >= 0:
            return False
        s = self.y + v
        if s.sign() < 0 or s.compare(1) >= 0:
            return False
        exp = greedy_expand(base, s)
        return exp.is_finite and exp == self.proof


@dataclass(frozen=True)
class SuffixKiller:
    """A stream continuation that forces finite normalization for a
    witness whose normalization tail is the given period."""
    period: PeriodicWord
    witness_prefix: tuple[int, ...]
    suffix: tuple[int, ...]
    proof: PeriodicWord

    def verify(self, base: PisotBase) -> bool:
        before = normalize_finite(base, self.witness_prefix)
        if before.is_finite:
            return False
        if canonical_rotation(before.word.per) != tuple(self.period.per):
            return False
        after = normalize_finite(base, self.witness_prefix + self.suffix)
        return after.is_finite and after.word == self.proof


Killer = Union[KillerCertificate, SuffixKiller]


@dataclass(frozen=True)
class WfReport:
    periods: tuple[PeriodicWord, ...]
    killers: tuple[Killer, ...]
    L1_estimate: int
    L2: int
    p: int
    L: int
    status: str  # "Proven-for-attractor" | "Inconclusive"


def _beta_neg_pow(base: PisotBase, n: int) -> FieldElement:
    return base.beta_pow(n).inverse()


def find_period_killer(base: PisotBase, y: FieldElement,
                       delta: Union[FieldElement, Fraction, int],
                       max_len: int = 12) -> Optional[KillerCertificate]:
    """Breadth-first search for an additive killer of the tail value y.

    Explores admissible words by increasing length and lexicographic
    order within a length, starting at the first length whose values can
    sit below delta, deduplicating candidates by exact value.  Returns
    None when the bounded search finds nothing — which proves nothing.
    """
    nums, den = y.numerator_vector()
    if den != 1:
        raise ValueError(
            "tail value lies outside Z[beta]; finite words cannot repair "
            "it additively — use a digit-suffix killer instead")
    if y.sign() < 0 or y.compare(1) >= 0:
        raise ValueError("tail value must lie in [0, 1)")
    if isinstance(delta, FieldElement):
        delta_el = delta
    else:
        delta_el = base.from_rational(Fraction(delta))
    if delta_el.sign() <= 0:
        raise ValueError("delta must be positive")

    # the value of a word of length n with a nonzero digit is >= beta^-n
    start = 1
    while start <= max_len and _beta_neg_pow(base, start).compare(delta_el) >= 0:
        start += 1

    seen: set = set()
    alphabet = range(base.digit_bound + 1)
    for length in range(start, max_len + 1):
        for digits in product(alphabet, repeat=length):
            if not digits[-1]:
                continue  # same value as a shorter word, already tried
            if not is_admissible(base, digits):
                continue
            v = word_value(base, digits)
            if v.sign() <= 0 or v.compare(delta_el) >= 0:
                continue
            if v.coeffs in seen:
                continue
            seen.add(v.coeffs)
            s = y + v
            if s.compare(1) >= 0:
                continue
            exp = greedy_expand(base, s)
            if exp.is_finite:
                return KillerCertificate(y=y, delta=delta_el,
                                         f=tuple(digits), proof=exp)
    return None


def killer_suffix(base: PisotBase, prefix, max_len: int = 8
                  ) -> tuple[int, ...]:
    """Shortest continuation (possibly empty) over the d-alphabet after
    which the whole stream normalizes finitely; deterministic
    breadth-first/lexicographic order."""
    prefix = tuple(int(x) for x in prefix)
    for length in range(max_len + 1):
        for s in product(range(base.d), repeat=length):
            if normalize_finite(base, prefix + s).is_finite:
                return s
    raise SearchExhaustedError(
        f"no killer suffix of length <= {max_len} found")


def _find_suffix_killer(base: PisotBase, period: PeriodicWord,
                        max_len: int = 8) -> Optional[SuffixKiller]:
    """Locate a witness stream whose normalization tail is ``period``,
    then the shortest suffix forcing it finite."""
    target = tuple(period.per)
    witness = None
    for length in range(1, max_len + 1):
        for w in product(range(base.d), repeat=length):
            if not w[-1]:
                continue
            nw = normalize_finite(base, w)
            if not nw.is_finite and canonical_rotation(nw.word.per) == target:
                witness = w
                break
        if witness is not None:
            break
    if witness is None:
        return None
    try:
        s = killer_suffix(base, witness, max_len)
    except SearchExhaustedError:
        return None
    proof = normalize_finite(base, witness + s).word
    return SuffixKiller(period=period, witness_prefix=witness,
                        suffix=s, proof=proof)


def wf_check(base: PisotBase, max_killer_len: int = 12,
             estimate_samples: int = 2000, seed: int = 0,
             attractor_budget: int = 2_000_000) -> WfReport:
    """Assemble the weak-finitarity report for one base.

    The attractor is enumerated over the lattice actually reached by
    scaled digit streams (denominator of the scale constant).  Tails in
    Z[beta] get additive killers with
    delta = (d-1)/(beta-1) * beta^-(L1+p); tails outside it get
    digit-suffix killers.  An exhausted search leaves the report
    Inconclusive — never a negative claim.
    """
    _, scale_den = base.scale.numerator_vector()
    periods = attractor_periods(base, denominator=scale_den,
                                budget=attractor_budget)
    nonempty = sorted((pw for pw in periods if pw.period_length),
                      key=lambda pw: (pw.period_length, pw.per))
    L1 = estimate_K(base, samples=estimate_samples, seed=seed)
    p = max((pw.period_length for pw in nonempty), default=0)

    killers: list[Killer] = []
    all_found = True
    for pw in nonempty:
        y = word_value(base, pw)
        if y.numerator_vector()[1] == 1:
            delta = base.scale.inverse() * _beta_neg_pow(base, L1 + p)
            cert = find_period_killer(base, y, delta, max_killer_len)
        else:
            cert = _find_suffix_killer(base, pw, max_killer_len)
        if cert is None:
            all_found = False
        else:
            killers.append(cert)

    L2 = 0
    for k in killers:
        L2 = max(L2, len(k.f) if isinstance(k, KillerCertificate)
                 else len(k.suffix))
    status = "Proven-for-attractor" if all_found else "Inconclusive"
    return WfReport(periods=tuple(nonempty), killers=tuple(killers),
                    L1_estimate=L1, L2=L2, p=p, L=L1 + L2 + p,
                    status=status)


@dataclass(frozen=True)
class GammaTable:
    """Observed vs. bounded decay of the never-finite prefix fraction."""
    L: int
    gamma: float
    samples: int
    seed: int
    n: tuple[int, ...]
    observed: tuple[float, ...]
    bound: tuple[float, ...]


def gamma_experiment(base: PisotBase, L: int, n_max: int = 60,
                     samples: int = 100_000, seed: int = 1) -> GammaTable:
    """Monte Carlo decay table for the fraction of digit streams none of
    whose prefixes of length <= n normalize finitely, against the bound
    gamma^n with gamma = (1 - d^-L)^(1/(2L)).

    The per-sample statistic is the first prefix length that normalizes
    finitely (or none); the reported fraction is then non-increasing in
    n by construction.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    gamma = (1 - base.d ** (-L)) ** (1 / (2 * L))
    rng = rng_for(seed, "gamma-experiment")
    digits = rng.integers(0, base.d, size=(int(samples), n_max),
                          dtype=np.int64)
    scale_nums, den = base.scale.numerator_vector()
    kern = base.kernel

    # histogram of first-finite prefix lengths; n_max+1 bucket = never
    first = np.empty(int(samples), dtype=np.int64)
    for i in range(int(samples)):
        k = kern.first_finite_prefix(digits[i], scale_nums, den)
        first[i] = k if k > 0 else n_max + 1

    ns = tuple(range(1, n_max + 1))
    observed = tuple(float(np.mean(first > n)) for n in ns)
    bound = tuple(gamma ** n for n in ns)
    return GammaTable(L=L, gamma=gamma, samples=int(samples), seed=seed,
                      n=ns, observed=observed, bound=bound)
