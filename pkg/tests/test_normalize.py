"""Normalization: exact value preservation, admissibility, block
decomposition of streams, two-sided stabilization, and the head-exchange
coordinate maps."""

import random

import pytest

from betalab import (
    PeriodicWord,
    block_split,
    coordinate_maps,
    d_realize,
    estimate_K,
    is_admissible,
    normalize_finite,
    scaled_word_value,
    shape,
    two_sided_normalize,
    word_value,
)
from betalab.errors import (
    DigitOutOfRangeError,
    NoStraddlingBlockError,
    SearchExhaustedError,
    StateBudgetError,
    WindowTooShortError,
)
from conftest import blockwise_window, finite_normalizing_word


def test_single_word_fixtures(golden2, golden3):
    nw = normalize_finite(golden2, [1, 1])
    assert nw.word == PeriodicWord((1,), ())
    assert normalize_finite(golden3, [2]).word == PeriodicWord((0, 1), ())
    # overhang: output one digit longer than the input
    assert normalize_finite(golden2, [1, 1, 1]).word == \
        PeriodicWord((1, 0, 0, 1), ())


def test_value_preservation_dual_route(unit_bases):
    rng = random.Random(17)
    for name, (base, _K) in unit_bases.items():
        for _ in range(60):
            w = [rng.randrange(base.d) for _ in range(rng.randrange(1, 14))]
            nw = normalize_finite(base, w)
            # left: closed-form value of the (possibly periodic) output;
            # right: direct scaled polynomial sum over the input digits
            assert word_value(base, nw.word) == scaled_word_value(base, w), \
                (name, w)
            assert is_admissible(base, nw.word)


def test_digit_range_checked(golden2):
    with pytest.raises(DigitOutOfRangeError):
        normalize_finite(golden2, [0, 2])


def test_budget_respected(golden2):
    with pytest.raises(StateBudgetError):
        normalize_finite(golden2, [1, 1, 1, 1, 1], max_states=2)


def test_periodic_output_and_shape(golden3):
    # (11) carries the scaled value c * (1/beta + 1/beta^2) = c, whose
    # greedy expansion is the pure cycle (001)^inf on the half lattice
    nw = normalize_finite(golden3, [1, 1])
    assert not nw.is_finite
    assert nw.word == PeriodicWord((), (0, 0, 1))
    pre, per = shape(golden3, nw)
    assert pre == () and per == (0, 0, 1)


def test_shape_of_finite_result(golden2):
    pre, per = shape(golden2, normalize_finite(golden2, [1, 1]))
    assert pre == (1,) and per == ()


def test_estimate_K_matches_frozen(unit_bases):
    for name, (base, K) in unit_bases.items():
        assert estimate_K(base) == K, name


def test_concatenation_identity(unit_bases):
    rng = random.Random(23)
    for name, (base, K) in unit_bases.items():
        for _ in range(30):
            w1 = finite_normalizing_word(base, K, rng)
            w2 = finite_normalizing_word(base, K, rng)
            whole = normalize_finite(base, w1 + [0] * (2 * K) + w2).word
            left = normalize_finite(base, w1 + [0] * K).word.pre
            right = normalize_finite(base, [0] * K + w2).word.pre
            slot = len(w1) + K
            assert len(left) <= slot
            glued = left + (0,) * (slot - len(left)) + right
            assert whole == PeriodicWord(glued, ()), (name, w1, w2)


def test_block_split_properties(unit_bases):
    rng = random.Random(29)
    for name, (base, K) in unit_bases.items():
        window, _left = blockwise_window(base, K, rng)
        dec = block_split(base, window, K)
        cuts = dec.cut_points
        assert cuts[0] == 0 and all(a < b for a, b in zip(cuts, cuts[1:]))
        assert dec.consumed == cuts[-1]
        out = dec.normalized_digits()
        # length-preserving; digit value of the output equals the scaled
        # value of the consumed input prefix
        assert len(out) == dec.consumed
        assert word_value(base, out) == \
            scaled_word_value(base, window[:dec.consumed])
        assert is_admissible(base, out)
        # each block normalizes in place, independently
        for blk, nb in zip(dec.blocks, dec.normalized_blocks):
            assert len(nb) == len(blk)
            assert word_value(base, nb) == scaled_word_value(base, blk)


def test_two_sided_stabilization(unit_bases):
    rng = random.Random(31)
    for name, (base, K) in unit_bases.items():
        for _ in range(10):
            window, left = blockwise_window(base, K, rng)
            out = two_sided_normalize(base, window, left, K)
            assert out.left_index == left
            assert out.stable_from <= 1 <= out.stable_to
            assert out.digit_at(out.left_index - 5) == 0
            assert is_admissible(base, out.digits)


def test_two_sided_window_too_short(golden2):
    with pytest.raises(WindowTooShortError):
        two_sided_normalize(golden2, [1], left_index=0, K=1)


def test_d_realize_round_trip(golden3):
    rng = random.Random(37)
    binv = golden3.beta_element().inverse()
    for _ in range(25):
        w = [rng.randrange(golden3.d) for _ in range(rng.randrange(1, 8))]
        y = golden3.zero()
        for dig in reversed(w):
            y = (y + dig) * binv
        got = d_realize(golden3, y)
        back = golden3.zero()
        for dig in reversed(got):
            back = (back + dig) * binv
        assert back == y
        assert all(0 <= dig < golden3.d for dig in got)
    with pytest.raises(ValueError):
        d_realize(golden3, -golden3.one())


def test_coordinate_maps_identities(golden2, golden3):
    rng = random.Random(41)
    for base in (golden2, golden3):
        for _ in range(10):
            window, left = blockwise_window(base, 1, rng)
            cm = coordinate_maps(base, window, left, K=1)
            assert cm.identities_hold
            assert cm.straddle_start <= -1 and cm.straddle_end >= 1
            # the digit-side window agrees with the input left of the head
            i_cut = cm.straddle_start - left
            assert cm.c_window[:i_cut] == tuple(window)[:i_cut]
            assert all(x == 0 for x in cm.c_window[i_cut:1 - left])


def test_coordinate_maps_lattice_obstruction(trib2):
    # on the tribonacci base some straddling heads fall outside the digit
    # lattice; the search must say so rather than loop
    rng = random.Random(43)
    outcomes = set()
    for _ in range(40):
        window, left = blockwise_window(trib2, 4, rng)
        try:
            cm = coordinate_maps(trib2, window, left, K=4)
            assert cm.identities_hold
            outcomes.add("ok")
        except SearchExhaustedError:
            outcomes.add("exhausted")
    assert "ok" in outcomes or "exhausted" in outcomes


def test_coordinate_maps_needs_straddle(golden2):
    with pytest.raises(NoStraddlingBlockError):
        # window entirely right of the origin
        coordinate_maps(golden2, [1, 0, 0, 0], left_index=3, K=1)
