"""Twin agreement between the compiled and pure orbit kernels, plus the
overflow fallback path of the dispatcher."""

import random

import numpy as np
import pytest

from betalab._kernel import compiled_available, make_kernel


pytestmark = pytest.mark.skipif(
    not compiled_available(), reason="compiled kernel not built")


def _twins(base):
    k = make_kernel(base)
    assert k.backend == "compiled"
    return k._pure, k._fast


def _random_state(base, rng, den_choices=(1, 2, 3, 6)):
    # realistic orbit inputs: a random lattice element reduced mod 1
    from fractions import Fraction
    den = rng.choice(den_choices)
    el = base.element([Fraction(rng.randint(-2 * den, 2 * den), den)
                       for _ in range(base.degree)])
    el = el - el.floor()
    return el.numerator_vector()


def test_orbit_and_is_finite_agree(unit_bases):
    rng = random.Random(7)
    for name, (base, _K) in unit_bases.items():
        pure, fast = _twins(base)
        for _ in range(120):
            nums, den = _random_state(base, rng)
            a = pure.orbit(nums, den, 5000)
            b = fast.orbit(nums, den, 5000)
            assert a == b, (name, nums, den)
            assert pure.is_finite(nums, den, 5000) == \
                fast.is_finite(nums, den, 5000)


def test_first_finite_prefix_agrees(unit_bases):
    rng = random.Random(11)
    for name, (base, _K) in unit_bases.items():
        pure, fast = _twins(base)
        scale_nums, den = base.scale.numerator_vector()
        for _ in range(60):
            row = [rng.randrange(base.d) for _ in range(40)]
            a = pure.first_finite_prefix(row, scale_nums, den)
            b = fast.first_finite_prefix(np.asarray(row, dtype=np.int64),
                                         scale_nums, den)
            assert a == b, (name, row)


def test_stream_values_bit_exact(unit_bases):
    rng = random.Random(13)
    for name, (base, K) in unit_bases.items():
        pure, fast = _twins(base)
        scale_nums, den = base.scale.numerator_vector()
        n0 = 8
        for _ in range(40):
            row = [rng.randrange(base.d) for _ in range(n0 + 30)]
            a = pure.stream_values(row, scale_nums, den, K, n0, 20)
            b = fast.stream_values(np.asarray(row, dtype=np.int64),
                                   scale_nums, den, K, n0, 20)
            # (ok, value, shifted value); floats must match to the bit
            assert a[0] == b[0]
            if a[0]:
                assert a[1] == b[1] and a[2] == b[2], (name, row)


def test_dispatcher_overflow_falls_back(golden2):
    kern = golden2.kernel
    big = 1 << 70          # far beyond the int64-safe range
    nums = (big, 0)
    den = 2 * big + 1      # the rational big/(2 big + 1), inside [0, 1)
    assert kern._pick(nums, den) is kern._pure
    assert kern._pick(*golden2.scale.numerator_vector()) is kern._fast
    # bounded walk must work on the arbitrary-precision path
    assert kern.finite_within(nums, den, 40) == \
        kern._pure.finite_within(nums, den, 40)


def test_forced_pure_backend(golden2):
    k = make_kernel(golden2, backend="pure")
    assert k.backend == "pure"
    digits, mu, lam = k.orbit((1, 0), 2, 1000)   # expand 1/2
    assert (digits, mu, lam) == golden2.kernel.orbit((1, 0), 2, 1000)


def test_divide_by_beta_is_exact_inverse(golden2, trib2):
    for base in (golden2, trib2):
        state = tuple([3] + [0] * (base.degree - 1))
        down = base.kernel.divide_by_beta(state)
        el = base.element(list(down))
        assert el * base.beta_element() == base.element(list(state))
