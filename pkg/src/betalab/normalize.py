"""Digit-word normalization in a scaled Pisot numeration system.

A word x_1 x_2 ... over the alphabet {0, ..., d-1} is normalized by
evaluating v = c * sum x_k beta^-k exactly, with c = (beta-1)/(d-1), and
re-expanding v greedily in base beta.  Because c is tuned so the largest
constant word evaluates to 1, v always lands in [0, 1) and the output is
an admissible word with the same value.

The same operation extends to infinite streams blockwise: a block may be
cut wherever the scanned prefix normalizes finitely (within the padded
block length) and is followed by 2K zeros, K being a carry-overhang bound
estimated empirically by :func:`estimate_K`.  Blocks normalize
independently, which is what makes two-sided normalization of windows
well defined and shift-equivariant at block granularity.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import (
    BudgetExceededError,
    DigitOutOfRangeError,
    NoStraddlingBlockError,
    PeriodNotInAttractorError,
    SearchExhaustedError,
    WindowTooShortError,
)
from .expansion import (
    _orbit_word,
    attractor_periods,
    canonical_rotation,
    word_value,
)
from .field import FieldElement, PisotBase
from .words import PeriodicWord


# --------------------------------------------------------------------------
# value computation


def _check_digits(base: PisotBase, digits: Sequence[int]) -> None:
    hi = base.d - 1
    for x in digits:
        if not 0 <= x <= hi:
            raise DigitOutOfRangeError(
                f"digit {x} outside alphabet {{0,...,{hi}}}")


def scaled_word_value(base: PisotBase, digits: Sequence[int]) -> FieldElement:
    """c * sum_k x_k beta^-k as an exact field element (c the base scale)."""
    binv = base.beta_element().inverse()
    acc = base.zero()
    for x in reversed(list(digits)):
        acc = (acc + base.from_rational(x)) * binv
    return acc * base.scale


def _scaled_numerators(base: PisotBase, digits: Sequence[int]):
    """(nums, den) of the scaled word value, on the fast integer path when
    the base is a unit and the exact-element path otherwise."""
    if base.is_unit:
        kern = base.kernel
        sn, sd = base.scale.numerator_vector()
        p = tuple(sn)
        m = base.degree
        v = (0,) * m
        for x in digits:
            p = kern.divide_by_beta(p)
            if x:
                v = tuple(v[i] + x * p[i] for i in range(m))
        return v, sd
    return scaled_word_value(base, digits).numerator_vector()


# --------------------------------------------------------------------------
# one-sided normalization


@dataclass(frozen=True)
class NormalizedWord:
    """Result of normalizing a finite digit word.

    ``word`` carries the same value as the input under the scaled
    evaluation, exactly; ``source_length`` is the input length.
    """
    word: PeriodicWord
    source_length: int

    @property
    def is_finite(self) -> bool:
        return self.word.is_finite


def normalize_finite(base: PisotBase, digits: Sequence[int],
                     max_states: int = 100_000) -> NormalizedWord:
    """Normalize a finite word over {0,...,d-1}.

    Computes the scaled value exactly and re-expands it greedily; the
    result is admissible and value-preserving by construction.  The output
    may be eventually periodic (reported through the returned word's
    ``is_finite``).
    """
    digits = tuple(digits)
    _check_digits(base, digits)
    nums, den = _scaled_numerators(base, digits)
    out, mu, lam = base.kernel.orbit(nums, den, max_states)
    return NormalizedWord(_orbit_word(out, mu, lam), len(digits))


def shape(base: PisotBase, nw: NormalizedWord):
    """Split a normalization into (finite prefix, periodic tail tag).

    The tail, when nonempty, must be one of the enumerated attractor
    cycles for the value lattice the word lives on; anything else means a
    bug in either the enumeration or the normalizer and is raised loudly.
    """
    pre = nw.word.pre
    per = nw.word.per
    if per:
        tail = word_value(base, PeriodicWord((), per))
        _, q = tail.numerator_vector()
        tags = {pw.per for pw in attractor_periods(base, denominator=q)}
        if canonical_rotation(per) not in tags:
            raise PeriodNotInAttractorError(
                f"period {per} not among {len(tags)} attractor cycles "
                f"(denominator {q})")
    return pre, per


def estimate_K(base: PisotBase, max_len: int = 12, samples: int = 2000,
               seed: int = 0, exhaustive_budget: int = 20_000,
               max_states: int = 50_000) -> int:
    """Empirical overhang bound K: max(len(normalized) - len(word)).

    Exhausts all words up to the length where the count would pass
    ``exhaustive_budget`` and samples random longer ones up to ``max_len``.
    The result is an empirical *lower bound* for the true carry constant;
    callers may override it upward.  Words whose normalization is not
    finite do not contribute (the bound concerns finite normalizations).
    """
    if max_len < 4:
        raise ValueError("max_len must be at least 4")
    d = base.d
    kern = base.kernel
    exhaustive_to = 0
    total = 0
    while exhaustive_to < max_len:
        nxt = total + d ** (exhaustive_to + 1)
        if nxt > exhaustive_budget:
            break
        total = nxt
        exhaustive_to += 1

    best = 0

    def probe(word) -> int:
        nums, den = _scaled_numerators(base, word)
        digits, mu, lam = kern.orbit(nums, den, max_states)
        if lam == 0:
            return len(digits) - len(word)
        return -len(word)

    alphabet = range(d)
    for n in range(1, exhaustive_to + 1):
        for word in itertools.product(alphabet, repeat=n):
            best = max(best, probe(word))

    rng = random.Random(seed)
    for _ in range(samples):
        n = rng.randint(exhaustive_to + 1, max_len) \
            if exhaustive_to < max_len else max_len
        word = tuple(rng.randrange(d) for _ in range(n))
        best = max(best, probe(word))
    return best


# --------------------------------------------------------------------------
# blockwise machinery


@dataclass(frozen=True)
class BlockDecomposition:
    """Cut positions and per-block normalizations of a stream prefix.

    ``cut_points`` starts at 0 and ends at ``consumed``; block i is the
    source slice between consecutive cuts, and ``normalized_blocks[i]`` is
    its finite normalization padded with trailing zeros to the same
    length.  Concatenating the blocks reproduces the consumed prefix;
    concatenating the normalized blocks gives the (admissible) blockwise
    normalization of that prefix.
    """
    cut_points: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    normalized_blocks: tuple[tuple[int, ...], ...]
    consumed: int

    def normalized_digits(self) -> tuple[int, ...]:
        out: list[int] = []
        for blk in self.normalized_blocks:
            out.extend(blk)
        return tuple(out)


class _BlockScanner:
    """Exact per-block state for the stream scan (value + finiteness)."""

    def __init__(self, base: PisotBase):
        self.base = base
        self.kern = base.kernel
        if base.is_unit:
            self.sn, self.sd = base.scale.numerator_vector()
        else:
            self.binv = base.beta_element().inverse()
        self.reset()

    def reset(self):
        if self.base.is_unit:
            self.p = tuple(self.sn)
            self.v = (0,) * self.base.degree
        else:
            self.pel = self.base.scale
            self.vel = self.base.zero()

    def push(self, x: int):
        if self.base.is_unit:
            self.p = self.kern.divide_by_beta(self.p)
            if x:
                self.v = tuple(self.v[i] + x * self.p[i]
                               for i in range(self.base.degree))
        else:
            self.pel = self.pel * self.binv
            if x:
                self.vel = self.vel + self.pel * self.base.from_rational(x)

    def numerators(self):
        if self.base.is_unit:
            return self.v, self.sd
        return self.vel.numerator_vector()

    def finite_within(self, bound: int) -> int:
        nums, den = self.numerators()
        return self.kern.finite_within(nums, den, bound)

    def block_word(self, length: int) -> tuple[int, ...]:
        nums, den = self.numerators()
        digits, mu, lam = self.kern.orbit(nums, den, length + 4)
        assert lam == 0 and len(digits) <= length
        return tuple(digits) + (0,) * (length - len(digits))


def block_split(base: PisotBase, stream: Iterable[int], K: int,
                budget: int = 100_000) -> BlockDecomposition:
    """Cut a digit stream into independently-normalizing blocks.

    A cut candidate is the smallest n for which the scanned block content
    x_1..x_n normalizes finitely within n+K digits and is followed by 2K
    zeros; the block then ends after K of those zeros, so every block ends
    with 0^K and the next one starts 0^K.  Scanning stops when the stream
    ends mid-block; completed blocks are returned.  A single block
    consuming more than ``budget`` digits raises BudgetExceeded.
    """
    if K < 0:
        raise ValueError("K must be nonnegative")
    it = iter(stream)
    pending: list[int] = []
    exhausted = False
    hi = base.d - 1

    def ensure(idx: int) -> bool:
        """Make pending[idx] available; False when the stream is shorter."""
        nonlocal exhausted
        while len(pending) <= idx:
            if exhausted:
                return False
            try:
                x = next(it)
            except StopIteration:
                exhausted = True
                return False
            if not 0 <= x <= hi:
                raise DigitOutOfRangeError(
                    f"stream digit {x} outside alphabet {{0,...,{hi}}}")
            pending.append(int(x))
        return True

    scan = _BlockScanner(base)
    cuts = [0]
    blocks: list[tuple[int, ...]] = []
    normed: list[tuple[int, ...]] = []
    consumed = 0
    k = 1
    while True:
        if k > budget:
            raise BudgetExceededError(
                f"no block cut within {budget} digits (K={K})")
        if not ensure(k - 1):
            break
        scan.push(pending[k - 1])
        if ensure(k + 2 * K - 1) and \
                all(pending[j] == 0 for j in range(k, k + 2 * K)):
            fit = k + K
            if scan.finite_within(fit) >= 0:
                length = k + K
                blocks.append(tuple(pending[:length]))
                normed.append(scan.block_word(length))
                del pending[:length]
                consumed += length
                cuts.append(consumed)
                scan.reset()
                k = 1
                continue
        k += 1
    return BlockDecomposition(tuple(cuts), tuple(blocks), tuple(normed),
                              consumed)


@dataclass(frozen=True)
class TwoSidedWord:
    """Blockwise normalization of a two-sided window.

    ``digits[i]`` sits at position ``left_index + i``; the output covers
    exactly the block-decomposed prefix of the window.  Coordinates in
    [stable_from, stable_to] are unchanged under dropping the leftmost
    block, which is the sense in which they have stabilized.
    """
    left_index: int
    digits: tuple[int, ...]
    stable_from: int
    stable_to: int
    cut_positions: tuple[int, ...]

    def digit_at(self, pos: int) -> int:
        i = pos - self.left_index
        if 0 <= i < len(self.digits):
            return self.digits[i]
        return 0


def two_sided_normalize(base: PisotBase, window: Sequence[int],
                        left_index: int, K: int,
                        budget: int = 100_000) -> TwoSidedWord:
    """Normalize a window x_{left_index} ... blockwise, with stabilization.

    Requires at least one complete block that ends left of position 1 (so
    the coordinates around the origin are already independent of anything
    further left).  The scan is repeated with the first block dropped and
    the outputs are required to agree on the overlap, making the reported
    stable range an actual observation rather than a promise.
    """
    window = tuple(window)
    dec = block_split(base, window, K, budget)
    if len(dec.cut_points) < 2:
        raise WindowTooShortError("window closed no complete block")
    first_cut = dec.cut_points[1]
    if left_index + first_cut - 1 > 0:
        raise WindowTooShortError(
            "no complete block ends left of position 1")
    dec2 = block_split(base, window[first_cut:], K, budget)
    shifted = tuple(c + first_cut for c in dec2.cut_points)
    if shifted != dec.cut_points[1:] or \
            dec2.normalized_blocks != dec.normalized_blocks[1:]:
        raise AssertionError("block scan is not restart-stable")
    out = dec.normalized_digits()
    return TwoSidedWord(
        left_index=left_index,
        digits=out,
        stable_from=left_index + first_cut,
        stable_to=left_index + dec.consumed - 1,
        cut_positions=tuple(left_index + c - 1 for c in dec.cut_points[1:]),
    )


# --------------------------------------------------------------------------
# coordinate changes between the one-sided systems


def d_realize(base: PisotBase, y: FieldElement,
              max_len: int = 4096, max_states: int = 100_000
              ) -> tuple[int, ...]:
    """A word over {0,...,d-1} with sum delta_j beta^-j = y, exactly.

    Breadth-first reachability over exact remainder states under
    u -> beta*u - digit: complete within the length bound, so a raise
    means no word of length <= max_len exists (greedy digit choice is
    not enough here — committing to the largest digit can force a longer
    tail than the bound allows).  Among the shortest words the
    lexicographically largest is returned, deterministically.
    """
    if y.sign() < 0:
        raise ValueError("cannot realize a negative value")
    if y.is_zero():
        return ()
    hi = base.d - 1
    beta = base.beta_element()
    cap = base.from_rational(hi) * (beta - 1).inverse()
    if y.compare(cap) > 0:
        raise ValueError("value exceeds the representable range")
    # frontier keyed by exact coordinates; iteration order keeps words
    # lex-descending, so the first completion is the lex-largest shortest
    frontier: dict = {y.coeffs: (y, ())}
    seen = {y.coeffs}
    for _ in range(max_len):
        nxt: dict = {}
        for u, word in frontier.values():
            t = u * beta
            for dig in range(hi, -1, -1):
                v = t - dig if dig else t
                if v.sign() < 0 or v.compare(cap) > 0:
                    continue
                if v.is_zero():
                    return word + (dig,)
                if v.coeffs in seen:
                    continue
                seen.add(v.coeffs)
                nxt[v.coeffs] = (v, word + (dig,))
                if len(seen) > max_states:
                    raise SearchExhaustedError(
                        "remainder state budget exhausted")
        if not nxt:
            break
        frontier = nxt
    raise SearchExhaustedError(
        f"no d-ary realization within {max_len} digits")


@dataclass(frozen=True)
class CoordinateMaps:
    """The two head-exchange maps on a blockwise window, with receipts.

    ``c_window`` zeroes the straddling block's nonpositive head and keeps
    the rest; ``c_prime_window`` additionally rewrites positions 1..b with
    a d-ary word carrying the straddling block's normalized positive
    value.  ``identities_hold`` records the digitwise check of both
    exchange identities over the comparable horizon.
    """
    left_index: int
    c_window: tuple[int, ...]
    c_prime_window: tuple[int, ...]
    straddle_start: int
    straddle_end: int
    identities_hold: bool
    horizon: int


def _normalized_from(base, window: Sequence[int], left_index: int,
                     from_pos: int) -> PeriodicWord:
    """The normalization of the window read one-sidedly from ``from_pos``,
    re-aligned so digit 0 of the result sits at position 1.

    Any block structure left of ``from_pos`` is irrelevant as long as
    ``from_pos`` is a cut of the window: everything earlier normalizes in
    place strictly left of ``from_pos``, so the stream at positions >= 1
    is exactly this word.  Works even when the tail normalizes to an
    eventually periodic word.
    """
    start = max(0, from_pos - left_index)
    nw = normalize_finite(base, window[start:])
    return nw.word.shift(max(0, 1 - from_pos))


def coordinate_maps(base: PisotBase, window: Sequence[int], left_index: int,
                    K: int, budget: int = 100_000) -> CoordinateMaps:
    """Build the two coordinate-change windows and verify their identities.

    Needs a block straddling the origin with at least one digit position
    on each side; adjacent blocks are merged when a cut lands exactly at
    the boundary.  The verification compares, digit by digit over the
    common computable horizon H:

      one-sided-normalization(c_window restricted to >= 1)   ==
      one-sided-normalization(window restricted to >= 1)  after blockwise
      normalization of c_window, and symmetrically for c_prime_window.
    """
    window = tuple(window)
    _check_digits(base, window)
    dec = block_split(base, window, K, budget)
    if dec.consumed == 0:
        raise NoStraddlingBlockError("window produced no complete block")

    spans = []
    for i in range(len(dec.blocks)):
        s = left_index + dec.cut_points[i]
        e = left_index + dec.cut_points[i + 1] - 1
        spans.append((s, e))
    if spans[0][0] > 0 or spans[-1][1] < 1:
        raise NoStraddlingBlockError(
            "window's blocks do not cover both sides of the origin")
    lo = hi = None
    for i, (s, e) in enumerate(spans):
        if s <= 0 <= e:
            lo = hi = i
            break
    if lo is None:
        # the origin sits exactly on a cut; take the two adjacent blocks
        for i in range(len(spans) - 1):
            if spans[i][1] == 0 and spans[i + 1][0] == 1:
                lo, hi = i, i + 1
                break
    if lo is None:
        raise NoStraddlingBlockError("origin not covered by any block")
    while spans[lo][0] > -1:
        if lo == 0:
            raise NoStraddlingBlockError(
                "no digit position left of the origin inside a block")
        lo -= 1
    while spans[hi][1] < 1:
        if hi == len(spans) - 1:
            raise NoStraddlingBlockError(
                "no digit position right of the origin inside a block")
        hi += 1
    start = spans[lo][0]                           # -a

    def idx(pos: int) -> int:
        return pos - left_index

    # In-place normalization of the (merged) straddling block.  The d-ary
    # head delta must stay inside the replaced region 1..b and be followed
    # by 2K zeros (or by nothing but zeros to the window end) so carries
    # cannot reach the next block; when that fails we widen the straddle
    # by merging the next block in and try again.
    binv = base.beta_element().inverse()
    delta: tuple[int, ...] | None = None
    while True:
        end = spans[hi][1]                         # b
        merged: list[int] = []
        for i in range(lo, hi + 1):
            merged.extend(dec.normalized_blocks[i])
        eps_pos = merged[1 - start:]               # slice at positions 1..b
        val = base.zero()
        for x in reversed(eps_pos):
            val = (val + base.from_rational(x)) * binv
        y = val / base.scale
        if base.is_unit and y.numerator_vector()[1] != 1:
            # finite d-ary words over a unit base take values in Z[beta];
            # a fractional target can never be realized, merging right
            # cannot change its class, so say so instead of searching
            raise SearchExhaustedError(
                "straddling head value is not in the digit lattice; no "
                "finite d-ary head exists for this window")
        try:
            cand = d_realize(base, y, max_len=end)
        except SearchExhaustedError:
            cand = None
        if cand is not None:
            for p in range(len(cand) + 1, len(cand) + 2 * K + 1):
                if p <= end:
                    continue       # inside the replaced region: zero-padded
                i = idx(p)
                if 0 <= i < len(window) and window[i] != 0:
                    break
            else:
                delta = cand
                break
        if hi + 1 < len(spans):
            hi += 1
        else:
            raise SearchExhaustedError(
                "no d-ary head fits the straddling block, even after "
                "merging every block to its right")

    c_win = list(window)
    for pos in range(start, 1):
        c_win[idx(pos)] = 0

    cp_win = list(c_win)
    for j in range(1, end + 1):
        cp_win[idx(j)] = delta[j - 1] if j - 1 < len(delta) else 0

    # --- verification: exact word equality, infinite horizon --------------
    # Everything left of the straddle start normalizes in place, so both
    # one-sided maps reduce to normalizations read from `start` (for the
    # beta side) and from 1 (for the d side).
    p_of_c = _normalized_from(base, c_win, left_index, start)
    q_of_x = _normalized_from(base, window, left_index, 1)
    p_of_x = _normalized_from(base, window, left_index, start)
    q_of_cp = _normalized_from(base, cp_win, left_index, 1)
    ok = (p_of_c == q_of_x) and (q_of_cp == p_of_x)
    horizon = left_index + len(window) - 1
    return CoordinateMaps(
        left_index=left_index,
        c_window=tuple(c_win),
        c_prime_window=tuple(cp_win),
        straddle_start=start,
        straddle_end=end,
        identities_hold=ok,
        horizon=horizon,
    )
