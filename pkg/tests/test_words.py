"""Eventually periodic digit words: canonical form, indexing, shifting,
and the lexicographic stream comparison."""

import pytest

from betalab import PeriodicWord
from betalab.words import compare_streams, lex_less


def test_canonical_form_reduces_period():
    w = PeriodicWord((1,), (1, 0, 1, 0))
    assert w.per == (1, 0)
    assert PeriodicWord((), (0,)) == PeriodicWord.zero()
    # trailing zeros of a finite word are dropped
    assert PeriodicWord((1, 0, 0), ()).pre == (1,)


def test_preperiod_absorbed_into_period():
    # 1 (01)^inf == (10)^inf shifted names, canonical pre should shrink
    a = PeriodicWord((1,), (0, 1))
    b = PeriodicWord((), (1, 0))
    assert a == b
    assert a.pre == ()


def test_digit_indexing_and_prefix():
    w = PeriodicWord((2,), (0, 1))
    assert [w.digit(i) for i in range(6)] == [2, 0, 1, 0, 1, 0]
    assert w.prefix(4) == (2, 0, 1, 0)
    zero = PeriodicWord.zero()
    assert zero.digit(10) == 0


def test_shift():
    w = PeriodicWord((1, 2), (3, 4))
    assert w.shift(1) == PeriodicWord((2,), (3, 4))
    assert w.shift(2) == PeriodicWord((), (3, 4))
    assert w.shift(3) == PeriodicWord((), (4, 3))
    assert w.shift(0) == w


def test_finite_flags():
    assert PeriodicWord((1, 1), ()).is_finite
    assert not PeriodicWord((), (1, 0)).is_finite
    assert PeriodicWord((), ()).is_finite


def test_compare_streams():
    a = PeriodicWord((), (1, 0))      # 101010...
    b = PeriodicWord((1, 1), ())      # 110000...
    assert compare_streams(a, b) < 0
    assert compare_streams(b, a) > 0
    assert compare_streams(a, PeriodicWord((1,), (0, 1))) == 0
    assert lex_less(a, b) and not lex_less(b, a)


def test_words_are_immutable_and_hashable():
    w = PeriodicWord((1,), (0, 1))
    with pytest.raises(AttributeError):
        w.pre = (2,)
    assert len({w, PeriodicWord((1,), (0, 1)), PeriodicWord.zero()}) == 2


def test_dict_round_trip():
    w = PeriodicWord((0, 1), (1, 1, 0))
    assert PeriodicWord.from_dict(w.as_dict()) == w
    assert w.as_dict() == {"pre": [0, 1], "per": [1, 1, 0]}
