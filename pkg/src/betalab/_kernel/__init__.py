"""Kernel backend selection.

Two interchangeable twins implement the digit-orbit loops: a compiled
int64 version (fast path) and a pure Python version with arbitrary
precision integers (always available, also the overflow fallback).  The
dispatcher prefers the compiled twin when it imported cleanly and the
input numerators fit comfortably in 64 bits, and silently reruns a call
on the pure twin when the compiled one signals KernelRange mid-orbit.

Set the environment variable BETALAB_KERNEL=pure to force the fallback
(used by the benchmark and the twin-agreement tests).
"""

from __future__ import annotations

import os
from typing import Sequence

from ._orbit_py import KernelRange, PureKernel

try:
    from . import _orbit_c
except ImportError:  # compiled twin is optional
    _orbit_c = None

# inputs whose numerators exceed this go straight to the pure twin
_INT64_SAFE = 1 << 60


def compiled_available() -> bool:
    return _orbit_c is not None


class Kernel:
    """Dispatching facade with the same surface as the twins."""

    def __init__(self, pure: PureKernel, fast=None):
        self._pure = pure
        self._fast = fast
        self.backend = "compiled" if fast is not None else "pure"

    def _pick(self, nums: Sequence[int], den: int):
        if self._fast is None:
            return self._pure
        if abs(den) >= _INT64_SAFE or any(abs(n) >= _INT64_SAFE for n in nums):
            return self._pure
        return self._fast

    def orbit(self, nums, den, max_steps: int = 1_000_000):
        try:
            return self._pick(nums, den).orbit(nums, den, max_steps)
        except KernelRange:
            return self._pure.orbit(nums, den, max_steps)

    def is_finite(self, nums, den, max_steps: int = 1_000_000) -> bool:
        try:
            return self._pick(nums, den).is_finite(nums, den, max_steps)
        except KernelRange:
            return self._pure.is_finite(nums, den, max_steps)

    def first_finite_prefix(self, digits, scale_nums, den,
                            max_steps: int = 1_000_000) -> int:
        try:
            return self._pick(scale_nums, den).first_finite_prefix(
                digits, scale_nums, den, max_steps)
        except KernelRange:
            return self._pure.first_finite_prefix(digits, scale_nums, den, max_steps)

    def divide_by_beta(self, u):
        return self._pure.divide_by_beta(u)

    def finite_within(self, nums, den, bound: int) -> int:
        try:
            return self._pick(nums, den).finite_within(nums, den, bound)
        except KernelRange:
            return self._pure.finite_within(nums, den, bound)

    def stream_values(self, row, scale_nums, den, K: int, n0: int, n_out: int):
        if self._fast is not None and abs(den) < _INT64_SAFE \
                and all(abs(n) < _INT64_SAFE for n in scale_nums):
            import numpy as np
            data = np.ascontiguousarray(row, dtype=np.int64)
            try:
                return self._fast.stream_values(data, scale_nums, den, K, n0, n_out)
            except KernelRange:
                pass
        return self._pure.stream_values(row, scale_nums, den, K, n0, n_out)


def _inverse_row(rec: Sequence[int]) -> tuple[int, ...] | None:
    """Coordinates of 1/beta over the power basis, for unit bases."""
    m = len(rec)
    k_m = rec[m - 1]
    if abs(k_m) != 1:
        return None
    row = [0] * m
    row[m - 1] = k_m
    for j in range(1, m):
        row[m - 1 - j] = -k_m * rec[j - 1]
    return tuple(row)


def make_kernel(base, backend: str | None = None) -> Kernel:
    """Build the orbit kernel for a validated base.

    ``backend`` may be "pure" or "compiled" to force a twin; default picks
    the compiled one when built, honoring BETALAB_KERNEL=pure.
    """
    from ..field import FieldElement

    def exact_floor(nums: tuple[int, ...], den: int) -> int:
        from fractions import Fraction
        el = FieldElement(base, [Fraction(n, den) for n in nums])
        return el.floor()

    inv_row = _inverse_row(base.recurrence)
    pure = PureKernel(base.degree, base.recurrence, base.beta_float(),
                      base.digit_bound, exact_floor, inv_row)
    if backend is None:
        backend = os.environ.get("BETALAB_KERNEL", "")
    if backend == "pure":
        return Kernel(pure, None)
    fast = None
    if _orbit_c is not None:
        fast = _orbit_c.CompiledKernel(base.degree, base.recurrence, base.beta_float(),
                                       base.digit_bound, exact_floor, inv_row)
    if backend == "compiled" and fast is None:
        raise RuntimeError("compiled kernel requested but not built")
    return Kernel(pure, fast)
