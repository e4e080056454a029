"""Exact arithmetic in the number field generated by a Pisot number.

Elements are represented by rational coordinate vectors against the power
basis ``1, beta, ..., beta^(m-1)`` of ``Q[x]/(p)`` where ``p`` is the monic
defining polynomial.  All ring operations reduce modulo ``p`` and keep exact
``Fraction`` coordinates, so equality is decidable and no comparison is ever
answered by floating point alone.

Order comparisons against the real embedding use an isolating interval for
the dominant root.  The interval is refined by bisection on demand: an exact
zero test runs first, then the interval is narrowed (starting at 64 bits,
doubling each round) until the sign of the difference is determined.  For
irrational values this always terminates; integrality is detected exactly
from the coordinate vector, never numerically.

Base validation is strict.  A surprisingly pleasant fact keeps the field
honest: a monic integer polynomial with no rational root, no repeated
factor, exactly one real root above 1 and every remaining root strictly
inside the unit circle is automatically irreducible (any proper monic factor
avoiding the dominant root would need integer constant term of modulus < 1,
i.e. 0, i.e. a rational root).  The construction checks therefore guarantee
that inversion is well defined.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath

from .errors import (
    AlphabetError,
    MixedBasesError,
    NoDominantRootError,
    NotMonicError,
    NotPisotError,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


# ---------------------------------------------------------------------------
# dense polynomial helpers (coefficients low degree first, exact rationals)
# ---------------------------------------------------------------------------


def _poly_trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_eval(c: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = _ZERO
    for a in reversed(c):
        acc = acc * x + a
    return acc


def _poly_deriv(c: Sequence[Fraction]) -> list[Fraction]:
    return [a * i for i, a in enumerate(c)][1:]


def _poly_rem(num: Sequence[Fraction], den: Sequence[Fraction]) -> list[Fraction]:
    num = _poly_trim(list(num))
    dn = len(den) - 1
    lead = den[-1]
    while num and len(num) - 1 >= dn:
        shift = len(num) - 1 - dn
        factor = num[-1] / lead
        for i, a in enumerate(den):
            num[i + shift] -= factor * a
        num.pop()
        _poly_trim(num)
    return num


def _poly_gcd_degree(a: Sequence[Fraction], b: Sequence[Fraction]) -> int:
    """Degree of gcd(a, b); 0 means coprime (up to constants)."""
    fa, fb = list(a), list(b)
    while _poly_trim(fb):
        fa, fb = fb, _poly_rem(fa, fb)
    return len(fa) - 1


def _sturm_chain(c: Sequence[Fraction]) -> list[list[Fraction]]:
    chain = [list(c), _poly_deriv(c)]
    while len(chain[-1]) > 1 or (chain[-1] and chain[-1][0] != 0):
        rem = _poly_rem(chain[-2], chain[-1])
        if not _poly_trim(rem):
            break
        chain.append([-a for a in rem])
    return chain


def _sign_changes(chain: Iterable[Sequence[Fraction]], x: Fraction) -> int:
    signs = []
    for poly in chain:
        v = _poly_eval(poly, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _count_roots_in(chain, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in (lo, hi] by Sturm's theorem."""
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


# ---------------------------------------------------------------------------
# isolating interval for the dominant root
# ---------------------------------------------------------------------------


class _RootInterval:
    """Shrinking rational bracket [lo, hi] around the dominant root.

    Refinement is guarded by a lock so bases can be shared across worker
    threads; power tables for both endpoints are cached per refinement
    generation because interval evaluation reuses them heavily.
    """

    def __init__(self, poly: Sequence[Fraction], lo: Fraction, hi: Fraction):
        self._poly = list(poly)
        self.lo = lo
        self.hi = hi
        self._sign_lo = 1 if _poly_eval(self._poly, lo) > 0 else -1
        self._lock = threading.Lock()
        self._pow_cache: tuple[Fraction, Fraction, list[Fraction], list[Fraction]] | None = None

    def refine(self, steps: int = 1) -> None:
        with self._lock:
            for _ in range(steps):
                mid = (self.lo + self.hi) / 2
                v = _poly_eval(self._poly, mid)
                # mid is rational and the polynomial has no rational roots,
                # so v == 0 cannot occur for validated bases
                if (1 if v > 0 else -1) == self._sign_lo:
                    self.lo = mid
                else:
                    self.hi = mid
            self._pow_cache = None

    def width(self) -> Fraction:
        return self.hi - self.lo

    def powers(self, count: int) -> tuple[list[Fraction], list[Fraction]]:
        """[lo^0..lo^(count-1)], [hi^0..hi^(count-1)] for the current bracket."""
        with self._lock:
            cache = self._pow_cache
            if (cache is not None and cache[0] == self.lo and cache[1] == self.hi
                    and len(cache[2]) >= count):
                return cache[2][:count], cache[3][:count]
            plo, phi = [_ONE], [_ONE]
            for _ in range(count - 1):
                plo.append(plo[-1] * self.lo)
                phi.append(phi[-1] * self.hi)
            self._pow_cache = (self.lo, self.hi, plo, phi)
            return plo, phi


def _isolate_dominant_root(coeffs: Sequence[int]) -> _RootInterval:
    """Bracket the unique real root > 1, or raise NoDominantRootError."""
    poly = [Fraction(c) for c in coeffs]
    chain = _sturm_chain(poly)
    bound = Fraction(1) + max(abs(Fraction(c)) for c in coeffs[:-1])  # Cauchy
    n_above = _count_roots_in(chain, Fraction(1), bound)
    if n_above != 1:
        raise NoDominantRootError(
            f"expected exactly one real root in (1, {bound}], found {n_above}"
        )
    lo, hi = Fraction(1), bound
    # bisect until the bracket contains exactly the dominant root and has
    # positive polynomial value at hi (sign normalization for refine())
    while _count_roots_in(chain, lo, hi) != 1 or hi - lo > Fraction(1, 2):
        mid = (lo + hi) / 2
        if _count_roots_in(chain, mid, hi) == 1:
            lo = mid
        else:
            hi = mid
    interval = _RootInterval(poly, lo, hi)
    interval.refine(64)
    return interval


# ---------------------------------------------------------------------------
# certified conjugate data
# ---------------------------------------------------------------------------


def _certified_roots(coeffs: Sequence[int]) -> list[tuple[complex, float]]:
    """All roots with rigorous error radii.

    Uses high precision numerics for the centers; the radius
    ``m * |p(r)| / |p'(r)|`` is a theorem-backed bound on the distance from
    ``r`` to the nearest true root.  Disjointness of the disks then pins one
    root per disk.
    """
    m = len(coeffs) - 1
    with mpmath.workdps(60):
        roots = mpmath.polyroots([mpmath.mpf(c) for c in reversed(coeffs)], maxsteps=200)
        out = []
        for r in roots:
            pr = mpmath.polyval([mpmath.mpf(c) for c in reversed(coeffs)], r)
            dcoeffs = [mpmath.mpf(i * coeffs[i]) for i in range(m, 0, -1)]
            dpr = mpmath.polyval(dcoeffs, r)
            if dpr == 0:
                raise NotPisotError("root cluster too tight to certify")
            radius = float(m * abs(pr) / abs(dpr))
            out.append((complex(r), radius))
    for i, (ri, radi) in enumerate(out):
        for rj, radj in out[i + 1 :]:
            if abs(ri - rj) <= radi + radj:
                raise NotPisotError("root disks overlap; cannot certify conjugates")
    return out


# ---------------------------------------------------------------------------
# field elements
# ---------------------------------------------------------------------------


class FieldElement:
    """An element of Q(beta) as an exact rational vector over ``1..beta^(m-1)``."""

    __slots__ = ("base", "coeffs")

    def __init__(self, base: "PisotBase", coeffs: Sequence[Fraction]):
        self.base = base
        self.coeffs = tuple(coeffs)

    # -- construction helpers ------------------------------------------------

    def _wrap(self, coeffs: Sequence[Fraction]) -> "FieldElement":
        return FieldElement(self.base, coeffs)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.base is not self.base:
                raise MixedBasesError("operands belong to different bases")
            return other
        if isinstance(other, (int, Fraction)):
            return self.base.from_rational(other)
        return NotImplemented  # type: ignore[return-value]

    # -- ring / field operations ---------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap([a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap([a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self):
        return self._wrap([-a for a in self.coeffs])

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        m = self.base.degree
        conv = [_ZERO] * (2 * m - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                if b != 0:
                    conv[i + j] += a * b
        red = list(conv[:m])
        for i in range(m, 2 * m - 1):
            c = conv[i]
            if c != 0:
                for j, t in enumerate(self.base._power_table[i - m]):
                    red[j] += c * t
        return self._wrap(red)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> "FieldElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.base.one()
        acc = self
        while n:
            if n & 1:
                result = result * acc
            acc = acc * acc
            n >>= 1
        return result

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse by exact Gaussian elimination."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        m = self.base.degree
        # columns: coordinates of self * beta^j
        cols = [list(self.coeffs)]
        for _ in range(m - 1):
            cols.append(list(self.base._shift_up(cols[-1])))
        aug = [[cols[j][i] for j in range(m)] + [_ONE if i == 0 else _ZERO] for i in range(m)]
        for col in range(m):
            pivot = next(r for r in range(col, m) if aug[r][col] != 0)
            aug[col], aug[pivot] = aug[pivot], aug[col]
            pv = aug[col][col]
            aug[col] = [v / pv for v in aug[col]]
            for r in range(m):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
        return self._wrap([aug[i][m] for i in range(m)])

    # -- predicates and comparisons -------------------------------------------

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)

    def is_rational(self) -> bool:
        return all(a == 0 for a in self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is irrational")
        return self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.base is other.base and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.base), self.coeffs))

    def sign(self) -> int:
        """-1, 0 or +1 under the real embedding, decided exactly."""
        if self.is_zero():
            return 0
        if self.is_rational():
            return 1 if self.coeffs[0] > 0 else -1
        interval = self.base._interval
        while True:
            lo, hi = self._interval_value(interval)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            interval.refine(interval_step_bits(interval))

    def compare(self, other) -> int:
        o = self._coerce(other)
        return (self - o).sign()

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def _interval_value(self, interval: _RootInterval) -> tuple[Fraction, Fraction]:
        plo, phi = interval.powers(self.base.degree)
        lo = hi = _ZERO
        for a, pl, ph in zip(self.coeffs, plo, phi):
            if a >= 0:
                lo += a * pl
                hi += a * ph
            else:
                lo += a * ph
                hi += a * pl
        return lo, hi

    def floor(self) -> int:
        """Exact floor under the real embedding."""
        if self.is_rational():
            num = self.coeffs[0]
            return num.numerator // num.denominator
        interval = self.base._interval
        while True:
            lo, hi = self._interval_value(interval)
            flo = lo.numerator // lo.denominator
            fhi = hi.numerator // hi.denominator
            if flo == fhi:
                return flo
            interval.refine(interval_step_bits(interval))

    # -- numeric views ---------------------------------------------------------

    def to_float(self) -> float:
        return float(self.to_mpf())

    def to_mpf(self, dps: int = 40):
        with mpmath.workdps(dps):
            b = self.base.beta_mpf(dps)
            acc = mpmath.mpf(0)
            for a in reversed(self.coeffs):
                acc = acc * b + mpmath.mpf(a.numerator) / a.denominator
            return acc

    def conjugate_bounds(self) -> list[float]:
        """Rigorous upper bounds on |x| under each non-dominant embedding."""
        bounds = []
        for root, radius in self.base.conjugates:
            total = 0.0
            mod = abs(root) + radius
            p = 1.0
            for a in self.coeffs:
                total += abs(float(a)) * p
                p *= mod
            # crude but safe: |sum a_j r^j| <= sum |a_j| (|r|+rad)^j
            bounds.append(total)
        return bounds

    def numerator_vector(self) -> tuple[tuple[int, ...], int]:
        """Integer coordinates over one common positive denominator."""
        den = math.lcm(*(a.denominator for a in self.coeffs))
        nums = tuple(int(a * den) for a in self.coeffs)
        return nums, den

    def __repr__(self):
        return f"FieldElement({list(self.coeffs)!r})"


def interval_step_bits(interval: _RootInterval) -> int:
    """Refinement schedule: double the precision each round from 64 bits."""
    w = interval.width()
    if w >= Fraction(1, 1 << 64):
        return 64
    bits = (w.denominator.bit_length() - w.numerator.bit_length()) or 1
    return max(64, bits)


# ---------------------------------------------------------------------------
# validated bases
# ---------------------------------------------------------------------------


class PisotBase:
    """A validated pair (beta, d): Pisot root of the stored polynomial and
    an alphabet {0, ..., d-1} with beta < d.

    Instances are immutable and identity-hashed; every derived object
    (elements, kernels, expansions) holds a reference to its base and
    cross-base arithmetic raises :class:`MixedBasesError`.
    """

    def __init__(self, coeffs: tuple[int, ...], d: int, interval: _RootInterval,
                 conjugates: list[tuple[complex, float]]):
        self.minpoly = coeffs          # low degree first, monic
        self.degree = len(coeffs) - 1
        self.d = d
        self._interval = interval
        self.conjugates = conjugates   # non-dominant roots with radii
        # recurrence coefficients: beta^m = sum_j k_j beta^(m-j)
        self.recurrence = tuple(-coeffs[self.degree - j] for j in range(1, self.degree + 1))
        self.is_unit = abs(coeffs[0]) == 1
        self._power_table = self._build_power_table()
        self._beta_mpf_cache: dict[int, object] = {}
        self.digit_bound = self.beta_element().floor()
        self._one_expansion = None
        self._kernel = None
        self._attractors: dict[int, tuple] = {}

    def _build_power_table(self) -> list[tuple[Fraction, ...]]:
        """beta^(m+i) over the power basis for i = 0..m-2."""
        m = self.degree
        table = []
        row = [Fraction(-c) for c in self.minpoly[:m]]
        table.append(tuple(row))
        for _ in range(m - 2):
            shifted = [_ZERO] + row[:-1]
            top = row[-1]
            if top != 0:
                for j in range(m):
                    shifted[j] += top * table[0][j]
            row = shifted
            table.append(tuple(row))
        return table

    def _shift_up(self, coeffs: Sequence[Fraction]) -> list[Fraction]:
        """Coordinates of beta * x for x given by ``coeffs``."""
        m = self.degree
        out = [_ZERO] + list(coeffs[:-1])
        top = coeffs[-1]
        if top != 0:
            for j in range(m):
                out[j] += top * self._power_table[0][j]
        return out

    # -- element constructors --------------------------------------------------

    def element(self, coeffs: Sequence[Fraction | int]) -> FieldElement:
        if len(coeffs) != self.degree:
            raise ValueError(f"need {self.degree} coordinates")
        return FieldElement(self, [Fraction(c) for c in coeffs])

    def zero(self) -> FieldElement:
        return self.element([0] * self.degree)

    def one(self) -> FieldElement:
        return self.element([1] + [0] * (self.degree - 1))

    def from_rational(self, q: Fraction | int) -> FieldElement:
        return self.element([Fraction(q)] + [0] * (self.degree - 1))

    def beta_element(self) -> FieldElement:
        return self.element([0, 1] + [0] * (self.degree - 2))

    @property
    def scale(self) -> FieldElement:
        """The alphabet scaling constant (beta - 1) / (d - 1)."""
        return (self.beta_element() - 1) / (self.d - 1)

    def beta_pow(self, n: int) -> FieldElement:
        return self.beta_element() ** n

    def beta_mpf(self, dps: int = 40):
        """High-precision real embedding of beta (Newton-polished, cached)."""
        cached = self._beta_mpf_cache.get(dps)
        if cached is not None:
            return cached
        with mpmath.workdps(dps + 10):
            x = mpmath.mpf(self._interval.lo.numerator) / self._interval.lo.denominator
            p = [mpmath.mpf(c) for c in reversed(self.minpoly)]
            dp = [mpmath.mpf(i * self.minpoly[i]) for i in range(self.degree, 0, -1)]
            # the isolating bracket is already 2^-64 wide, so a handful of
            # quadratically convergent steps covers any practical dps
            for _ in range(1 + dps.bit_length()):
                x = x - mpmath.polyval(p, x) / mpmath.polyval(dp, x)
        self._beta_mpf_cache[dps] = x
        return x

    def beta_float(self) -> float:
        return float(self.beta_mpf(30))

    # -- cached derived structures ----------------------------------------------

    @property
    def one_expansion(self):
        """Quasi-greedy expansion of 1 (shared admissibility reference)."""
        if self._one_expansion is None:
            from .expansion import quasi_greedy_one
            self._one_expansion = quasi_greedy_one(self)
        return self._one_expansion

    @property
    def kernel(self):
        if self._kernel is None:
            from ._kernel import make_kernel
            self._kernel = make_kernel(self)
        return self._kernel

    def __repr__(self):
        poly = " + ".join(
            f"{c}*x^{i}" if i else f"{c}"
            for i, c in enumerate(self.minpoly)
            if c != 0 or i == self.degree
        )
        return f"PisotBase(p = {poly}, d = {self.d})"


def _reject_rational_roots(coeffs: Sequence[int]) -> None:
    from .errors import ReducibleError

    c0 = coeffs[0]
    if c0 == 0:
        raise ReducibleError("zero constant term (rational root 0)")
    divisors = {k for k in range(1, abs(c0) + 1) if c0 % k == 0}
    poly = [Fraction(c) for c in coeffs]
    for k in divisors:
        for r in (Fraction(k), Fraction(-k)):
            if _poly_eval(poly, r) == 0:
                raise ReducibleError(f"rational root {r}")


def _reject_repeated_factors(coeffs: Sequence[int]) -> None:
    from .errors import ReducibleError

    poly = [Fraction(c) for c in coeffs]
    if _poly_gcd_degree(poly, _poly_deriv(poly)) > 0:
        raise ReducibleError("polynomial has a repeated factor")


@lru_cache(maxsize=None)
def _make_base_cached(coeffs: tuple[int, ...], d: int) -> PisotBase:
    m = len(coeffs) - 1
    if m < 2:
        raise NotMonicError("degree must be at least 2")
    if coeffs[-1] != 1:
        raise NotMonicError("polynomial must be monic")
    if not all(isinstance(c, int) for c in coeffs):
        raise NotMonicError("coefficients must be integers")
    _reject_rational_roots(coeffs)
    _reject_repeated_factors(coeffs)
    interval = _isolate_dominant_root(coeffs)
    roots = _certified_roots(coeffs)
    # split off the dominant root: the unique real one inside the bracket
    lo, hi = float(interval.lo), float(interval.hi)
    conjugates = []
    dominant_found = False
    for r, rad in roots:
        if abs(r.imag) <= rad and lo - rad <= r.real <= hi + rad and not dominant_found:
            dominant_found = True
            continue
        conjugates.append((r, rad))
    if not dominant_found:
        raise NoDominantRootError("numeric roots do not match the isolated bracket")
    for r, rad in conjugates:
        if abs(r) + rad >= 1.0:
            raise NotPisotError(
                f"conjugate with |z| >= 1 (certified |{r:.6f}| + {rad:.2e})"
            )
    if not isinstance(d, int) or d < 2:
        raise AlphabetError("alphabet size d must be an integer >= 2")
    # beta < d, decided exactly against the isolating interval
    dd = Fraction(d)
    while not (interval.hi < dd or interval.lo > dd):
        interval.refine(8)
    if interval.lo > dd:
        raise AlphabetError(f"beta > {d}: alphabet cannot represent [0, 1]")
    return PisotBase(coeffs, d, interval, conjugates)


def make_base(minpoly: Sequence[int], d: int) -> PisotBase:
    """Validate and build a base from monic integer coefficients (low first).

    Raises NotMonicError / ReducibleError / NoDominantRootError /
    NotPisotError / AlphabetError with a specific reason.  Bases are cached,
    so repeated construction with equal arguments returns the same object
    (element contexts compare by base identity).
    """
    return _make_base_cached(tuple(int(c) for c in minpoly), int(d))


# convenient fixtures used throughout the test-suite and docs
def golden_base(d: int = 2) -> PisotBase:
    """x^2 = x + 1."""
    return make_base([-1, -1, 1], d)


def tribonacci_base(d: int = 2) -> PisotBase:
    """x^3 = x^2 + x + 1."""
    return make_base([-1, -1, -1, 1], d)
