"""Field arithmetic: construction guards, exact ring laws, and agreement
of the interval-certified comparisons with high-precision floats."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import mpmath as mp

from betalab import make_base
from betalab.errors import (
    AlphabetError,
    NoDominantRootError,
    NotMonicError,
    NotPisotError,
    ReducibleError,
)


REJECTS = [
    ([-1, -1, 2], 2, NotMonicError),      # leading coefficient 2
    ([-1, 1], 2, NotMonicError),          # degree 1
    ([-1, 0, 1], 2, ReducibleError),      # x^2 - 1, rational roots
    ([1, 2, -1, -2, 1], 2, ReducibleError),   # (x^2-x-1)^2
    ([-2, 0, 1], 2, NotPisotError),       # conjugate -sqrt(2)
    ([1, 1, 1], 2, NoDominantRootError),  # no real root > 1
    ([3, -3, 1], 2, NoDominantRootError),     # complex pair only
    ([-1, -1, 1], 1, AlphabetError),      # d < 2
    ([-2, -2, 1], 2, AlphabetError),      # d-1 < floor(beta)
]


@pytest.mark.parametrize("minpoly,d,exc", REJECTS)
def test_make_base_rejects(minpoly, d, exc):
    with pytest.raises(exc):
        make_base(minpoly, d)


def test_make_base_accepts(golden2, golden3, trib2, nonunit3):
    assert golden2.degree == 2 and golden2.d == 2
    assert golden3.d == 3
    assert trib2.degree == 3
    assert golden2.is_unit and golden3.is_unit and trib2.is_unit
    assert not nonunit3.is_unit
    assert golden2.digit_bound == 1
    assert nonunit3.digit_bound == 2
    assert abs(golden2.beta_float() - (1 + 5 ** 0.5) / 2) < 1e-14
    assert abs(trib2.beta_float() - 1.8392867552141612) < 1e-14


def test_defining_relations(golden2, trib2, nonunit3):
    b = golden2.beta_element()
    assert b * b == b + 1
    t = trib2.beta_element()
    assert t ** 3 == t * t + t + 1
    n = nonunit3.beta_element()
    assert n * n == 2 * n + 2


def test_scale_constant(golden2, golden3):
    # (beta - 1) / (d - 1)
    assert golden2.scale == golden2.beta_element() - 1
    b3 = golden3.beta_element()
    assert golden3.scale == (b3 - 1) / 2
    assert abs(golden3.scale.to_float() - 0.3090169943749474) < 1e-15


coeff = st.fractions(min_value=-4, max_value=4, max_denominator=6)


@settings(max_examples=120, deadline=None)
@given(st.lists(coeff, min_size=2, max_size=2),
       st.lists(coeff, min_size=2, max_size=2),
       st.lists(coeff, min_size=2, max_size=2))
def test_ring_axioms_golden(a, b, c):
    base = make_base([-1, -1, 1], d=2)
    x, y, z = base.element(a), base.element(b), base.element(c)
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == base.zero()
    assert x * base.one() == x


@settings(max_examples=80, deadline=None)
@given(st.lists(coeff, min_size=3, max_size=3))
def test_inverse_tribonacci(a):
    base = make_base([-1, -1, -1, 1], d=2)
    x = base.element(a)
    if x.is_zero():
        with pytest.raises(ZeroDivisionError):
            x.inverse()
    else:
        assert x * x.inverse() == base.one()


@settings(max_examples=100, deadline=None)
@given(st.lists(coeff, min_size=2, max_size=2),
       st.lists(coeff, min_size=2, max_size=2))
def test_comparisons_match_mpmath(a, b):
    base = make_base([-1, -1, 1], d=2)
    x, y = base.element(a), base.element(b)
    got = x.compare(y)
    with mp.workdps(60):
        lhs, rhs = x.to_mpf(60), y.to_mpf(60)
        if abs(lhs - rhs) < mp.mpf(10) ** -50:
            want = 0
        else:
            want = -1 if lhs < rhs else 1
    assert got == want


@settings(max_examples=100, deadline=None)
@given(st.lists(coeff, min_size=2, max_size=2))
def test_floor_brackets_value(a):
    base = make_base([-1, -1, 1], d=2)
    x = base.element(a)
    n = x.floor()
    assert x.compare(n) >= 0
    assert x.compare(n + 1) < 0


def test_rational_detection(golden2):
    b = golden2.beta_element()
    q = b * b - b          # == 1
    assert q.is_rational()
    assert q.as_fraction() == 1
    assert not b.is_rational()
    with pytest.raises(ValueError):
        b.as_fraction()


def test_numerator_vector_round_trip(trib2):
    x = trib2.element([Fraction(3, 4), Fraction(-1, 6), Fraction(5, 2)])
    nums, den = x.numerator_vector()
    assert den > 0
    rebuilt = trib2.element([Fraction(n, den) for n in nums])
    assert rebuilt == x


def test_beta_pow_and_mpf(golden2):
    assert golden2.beta_pow(5) == golden2.beta_element() ** 5
    assert golden2.beta_pow(-2) == golden2.beta_element().inverse() ** 2
    with mp.workdps(40):
        err = abs(golden2.beta_mpf(40) - (1 + mp.sqrt(5)) / 2)
        assert err < mp.mpf(10) ** -38


def test_conjugate_bounds_inside_unit_disk(golden2, trib2, nonunit3):
    for base in (golden2, trib2, nonunit3):
        b = base.beta_element()
        for r in b.conjugate_bounds():
            assert r < 1.0


def test_element_caching_equality(golden2):
    # same minpoly+d must give interoperable elements
    other = make_base([-1, -1, 1], 2)
    assert other.element([1, 1]) == golden2.element([1, 1])
