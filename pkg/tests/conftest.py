"""Shared fixtures and corpus builders.

The three unit Pisot bases and the one non-unit base used across the
suite, plus the blockwise-window builders: a block is a digit run whose
normalization is finite and fits within its own length plus the zero-gap
constant K, followed by 2K zeros, so that assembled windows are
guaranteed to decompose blockwise.
"""

import pytest

from betalab import make_base, normalize_finite


@pytest.fixture(scope="session")
def golden2():
    return make_base([-1, -1, 1], d=2)


@pytest.fixture(scope="session")
def golden3():
    return make_base([-1, -1, 1], d=3)


@pytest.fixture(scope="session")
def trib2():
    return make_base([-1, -1, -1, 1], d=2)


@pytest.fixture(scope="session")
def nonunit3():
    return make_base([-2, -2, 1], d=3)


@pytest.fixture(scope="session")
def unit_bases(golden2, golden3, trib2):
    # name -> (base, frozen zero-gap constant)
    return {"golden-d2": (golden2, 1),
            "golden-d3": (golden3, 1),
            "tribonacci-d2": (trib2, 4)}


def finite_normalizing_word(base, K, rng, max_len=6):
    """A nonempty random word whose normalization is finite and overhangs
    by at most K digits (retry sampling; dense enough that this is cheap)."""
    while True:
        n = rng.randrange(1, max_len)
        w = [rng.randrange(base.d) for _ in range(n)]
        nw = normalize_finite(base, w)
        if nw.is_finite and nw.word.preperiod_length <= len(w) + K:
            return w


def random_block(base, K, rng, max_content=6):
    return finite_normalizing_word(base, K, rng, max_content) + [0] * (2 * K)


def blockwise_window(base, K, rng, n_blocks=6, origin_block=3):
    """Concatenation of complete blocks, with the origin placed inside the
    content of block ``origin_block``.  Returns (digits, left_index)."""
    w, origin = [], None
    for i in range(n_blocks):
        blk = random_block(base, K, rng)
        if i == origin_block:
            origin = len(w) + rng.randrange(len(blk) - 2 * K)
        w += blk
    return w, -origin
