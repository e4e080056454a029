# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled int64 twin of the pure digit-orbit kernel.

Same contract as PureKernel, with fixed-width integer state.  Every state
update is guarded: when a numerator would leave the range where the next
beta-multiply provably cannot overflow, KernelRange is raised and the
dispatcher reruns the call on the arbitrary-precision twin.
"""

from libc.math cimport floor as c_floor
from libc.stdlib cimport llabs

from betalab._kernel._orbit_py import KernelRange
from betalab.errors import StateBudgetError

DEF MAXM = 8

cdef double EPS = 2.3e-16


cdef class CompiledKernel:
    cdef int m
    cdef long long rec[MAXM]
    cdef long long inv_row[MAXM]
    cdef bint has_inv
    cdef long long digit_max
    cdef double beta_pows[MAXM]
    cdef long long limit
    cdef object exact_floor
    cdef readonly str name

    def __init__(self, m, rec, beta, digit_max, exact_floor, inv_row):
        if m > MAXM:
            raise KernelRange("degree too large for the compiled kernel")
        self.name = "compiled"
        self.m = m
        self.digit_max = digit_max
        self.exact_floor = exact_floor
        cdef int i
        cdef long long kmax = 1
        for i in range(m):
            self.rec[i] = rec[i]
            if llabs(self.rec[i]) > kmax:
                kmax = llabs(self.rec[i])
            self.beta_pows[i] = beta ** i
        self.has_inv = inv_row is not None
        if self.has_inv:
            for i in range(m):
                self.inv_row[i] = inv_row[i]
                if llabs(self.inv_row[i]) > kmax:
                    kmax = llabs(self.inv_row[i])
        self.limit = ((<long long>1) << 62) // (kmax * m + 2)

    cdef int _check_den(self, long long den) except -1:
        if den <= 0 or den > self.limit // (self.digit_max + 1):
            raise KernelRange("denominator too large for int64 arithmetic")
        return 0

    cdef int _load(self, long long *u, nums) except -1:
        cdef int i
        cdef long long x
        for i in range(self.m):
            x = nums[i]
            if llabs(x) > self.limit:
                raise KernelRange("numerator too large for int64 arithmetic")
            u[i] = x
        return 0

    cdef long long _step(self, long long *u, long long den) except? -1:
        """In-place beta-multiply-and-subtract-digit; returns the digit."""
        cdef int m = self.m
        cdef long long top = u[m - 1]
        cdef long long v[MAXM]
        cdef int i
        v[0] = top * self.rec[m - 1]
        for i in range(1, m):
            v[i] = u[i - 1] + top * self.rec[m - 1 - i]
        cdef double total = 0.0, absum = 0.0
        for i in range(m):
            if llabs(v[i]) > self.limit:
                raise KernelRange("orbit state outgrew int64 range")
            total += v[i] * self.beta_pows[i]
            absum += llabs(v[i]) * self.beta_pows[i]
        cdef double err = absum * (m + 3) * EPS / den
        cdef double y = total / den
        cdef double flo = c_floor(y - err)
        cdef long long digit
        if flo == c_floor(y + err):
            digit = <long long>flo
        else:
            digit = self.exact_floor(tuple(v[i] for i in range(m)), den)
        if digit < 0 or digit > self.digit_max:
            raise ValueError(
                f"digit {digit} outside [0, {self.digit_max}]: "
                "orbit input was not a remainder in [0, 1]")
        v[0] -= digit * den
        for i in range(m):
            u[i] = v[i]
        return digit

    cdef bint _is_zero(self, long long *u):
        cdef int i
        for i in range(self.m):
            if u[i] != 0:
                return False
        return True

    cdef bint _same(self, long long *a, long long *b):
        cdef int i
        for i in range(self.m):
            if a[i] != b[i]:
                return False
        return True

    cdef void _copy(self, long long *dst, long long *src):
        cdef int i
        for i in range(self.m):
            dst[i] = src[i]

    # -- public surface (mirrors PureKernel) -----------------------------------

    def orbit(self, nums, den, long long max_steps=1_000_000):
        cdef long long u[MAXM]
        cdef long long tort[MAXM]
        cdef long long hare[MAXM]
        cdef long long d = den
        self._check_den(d)
        self._load(u, nums)
        if self._is_zero(u):
            return [], 0, 0

        cdef long long power = 1, lam = 1, steps = 0, mu = 0
        self._copy(tort, u)
        self._copy(hare, u)
        self._step(hare, d)
        while not self._same(hare, tort):
            if self._is_zero(hare):
                return self._replay_finite(u, d, max_steps)
            if power == lam:
                self._copy(tort, hare)
                power *= 2
                lam = 0
            self._step(hare, d)
            lam += 1
            steps += 1
            if steps > max_steps:
                raise StateBudgetError(f"orbit exceeded {max_steps} steps")

        cdef long long i
        self._copy(tort, u)
        self._copy(hare, u)
        for i in range(lam):
            self._step(hare, d)
        while not self._same(tort, hare):
            self._step(tort, d)
            self._step(hare, d)
            mu += 1

        digits = []
        self._copy(tort, u)
        for i in range(mu + lam):
            digits.append(self._step(tort, d))
        return digits, mu, lam

    cdef _replay_finite(self, long long *start, long long den, long long max_steps):
        cdef long long u[MAXM]
        self._copy(u, start)
        digits = []
        while not self._is_zero(u):
            if len(digits) > max_steps:
                raise StateBudgetError(f"orbit exceeded {max_steps} steps")
            digits.append(self._step(u, den))
        return digits, len(digits), 0

    def is_finite(self, nums, den, long long max_steps=1_000_000):
        cdef long long u[MAXM]
        cdef long long tort[MAXM]
        cdef long long hare[MAXM]
        cdef long long d = den
        self._check_den(d)
        self._load(u, nums)
        if self._is_zero(u):
            return True
        cdef long long power = 1, lam = 1, steps = 0
        self._copy(tort, u)
        self._copy(hare, u)
        self._step(hare, d)
        while not self._same(hare, tort):
            if self._is_zero(hare):
                return True
            if power == lam:
                self._copy(tort, hare)
                power *= 2
                lam = 0
            self._step(hare, d)
            lam += 1
            steps += 1
            if steps > max_steps:
                raise StateBudgetError(f"orbit exceeded {max_steps} steps")
        return False

    cdef int _div_beta(self, long long *u) except -1:
        if not self.has_inv:
            raise ValueError("division by beta needs a unit base")
        cdef int m = self.m, i
        cdef long long t = u[0]
        for i in range(m - 1):
            u[i] = u[i + 1]
        u[m - 1] = 0
        if t:
            if llabs(t) > self.limit:
                raise KernelRange("numerator too large for int64 arithmetic")
            for i in range(m):
                u[i] += t * self.inv_row[i]
        for i in range(m):
            if llabs(u[i]) > self.limit:
                raise KernelRange("numerator too large for int64 arithmetic")
        return 0

    def divide_by_beta(self, u):
        cdef long long w[MAXM]
        self._load(w, u)
        self._div_beta(w)
        return tuple(w[i] for i in range(self.m))

    def first_finite_prefix(self, digits, scale_nums, den, long long max_steps=1_000_000):
        cdef long long p[MAXM]
        cdef long long v[MAXM]
        cdef long long d = den
        cdef int i
        self._check_den(d)
        self._load(p, scale_nums)
        for i in range(self.m):
            v[i] = 0
        cdef long long k = 0
        cdef long long x
        for x in digits:
            k += 1
            self._div_beta(p)
            if x:
                for i in range(self.m):
                    v[i] += x * p[i]
                    if llabs(v[i]) > self.limit:
                        raise KernelRange("numerator too large for int64 arithmetic")
            if self.is_finite(tuple(v[i] for i in range(self.m)), d, max_steps):
                return k
        return -1

    def finite_within(self, nums, den, bound):
        cdef long long state[MAXM]
        self._check_den(den)
        self._load(state, nums)
        return self._finite_within(state, den, bound)

    cdef long long _finite_within(self, long long *nums, long long den, long long bound) except? -2:
        cdef long long u[MAXM]
        self._copy(u, nums)
        cdef long long steps = 0
        while not self._is_zero(u):
            if steps >= bound:
                return -1
            self._step(u, den)
            steps += 1
        return steps

    def stream_values(self, row, scale_nums, den, long long K, long long n0, long long n_out):
        cdef long long[::1] data = row
        cdef long long j
        cdef long long p[MAXM]
        cdef long long v[MAXM]
        cdef long long base_p[MAXM]
        cdef long long state[MAXM]
        cdef long long d = den
        cdef int m = self.m, i
        self._check_den(d)
        self._load(base_p, scale_nums)
        self._copy(p, base_p)
        for i in range(m):
            v[i] = 0

        cdef double binv = 1.0 / self.beta_pows[1]
        cdef double binv_pows[514]
        cdef double acc = 1.0
        if n_out + 2 > 514:
            raise KernelRange("output window too long for the compiled scanner")
        binv_pows[0] = 0.0
        for j in range(1, n_out + 2):
            acc *= binv
            binv_pows[j] = acc
        cdef double val = 0.0, val_shift = 0.0
        cdef long long total = data.shape[0]
        cdef long long s = 1, k = 1, x, pos, lam, fit, dig
        cdef bint zeros

        while True:
            if s > n0 + n_out + 1:
                return True, val, val_shift
            if k > total:
                return False, 0.0, 0.0
            self._div_beta(p)
            x = data[k - 1]
            if x:
                for i in range(m):
                    v[i] += x * p[i]
                    if llabs(v[i]) > self.limit:
                        raise KernelRange("numerator too large for int64 arithmetic")
            if k + 2 * K <= total:
                zeros = True
                for j in range(k, k + 2 * K):
                    if data[j] != 0:
                        zeros = False
                        break
                if zeros:
                    fit = k - s + 1 + K
                    lam = self._finite_within(v, d, fit)
                    if lam >= 0:
                        self._copy(state, v)
                        for j in range(1, lam + 1):
                            dig = self._step(state, d)
                            if dig:
                                pos = s - 1 + j
                                if n0 < pos <= n0 + n_out:
                                    val += dig * binv_pows[pos - n0]
                                if n0 + 1 < pos <= n0 + 1 + n_out:
                                    val_shift += dig * binv_pows[pos - n0 - 1]
                        s = k + K + 1
                        k = k + K + 1
                        self._copy(p, base_p)
                        for i in range(m):
                            v[i] = 0
                        continue
            k += 1
