"""Monte Carlo measure estimation and diagnostics.

Three measures on [0, 1) meet here:

* the stationary digit measure — the law of  scale * sum x_n beta^-n
  with i.i.d. uniform digits (estimated by :func:`sample_erdos`);
* its shift-invariant companion — the law of the same series read off
  a blockwise-normalized stream far from the origin (estimated by
  :func:`invariant_estimate`, two ways);
* the absolutely continuous invariant baseline of the greedy map
  x -> beta*x mod 1 (computed in closed form by :func:`parry_density`).

Estimation is floating point on purpose: Monte Carlo noise dominates
any arithmetic error here, and the exact layer already guards the digit
combinatorics upstream.  Everything random goes through named Philox
substreams, so results are bit-reproducible for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (OrbitNotFiniteError, TruncationTooCoarseError,
                     WrongAlphabetError)
from .field import FieldElement, PisotBase
from .normalize import estimate_K
from .rng import rng_for

_CHUNK = 65_536


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Histogram over a uniform power-of-two partition of [0, 1)."""
    counts: tuple[int, ...]
    total: int
    seed: int
    truncation: int
    estimator: str

    def __post_init__(self):
        b = len(self.counts)
        if b & (b - 1) or b == 0:
            raise ValueError("bin count must be a power of two")
        if sum(self.counts) != self.total:
            raise ValueError("counts must sum to the sample total")

    @property
    def bins(self) -> int:
        return len(self.counts)

    def probabilities(self) -> np.ndarray:
        if self.total == 0:
            return np.zeros(self.bins)
        return np.asarray(self.counts, dtype=float) / self.total

    def coarsen(self, levels: int = 1) -> "EmpiricalMeasure":
        """Merge adjacent bins 2^levels at a time."""
        if levels < 0 or (self.bins >> levels) < 1:
            raise ValueError("cannot coarsen below one bin")
        arr = np.asarray(self.counts, dtype=np.int64)
        arr = arr.reshape(self.bins >> levels, 1 << levels).sum(axis=1)
        return EmpiricalMeasure(tuple(int(c) for c in arr), self.total,
                                self.seed, self.truncation, self.estimator)


def _check_truncation(base_beta: float, N: int, bins: int) -> None:
    if base_beta ** (-N) >= 1.0 / (10 * bins):
        raise TruncationTooCoarseError(
            f"beta^-{N} tail exceeds a tenth of the bin width at "
            f"{bins} bins; increase N")


def _hist(values: np.ndarray, bins: int) -> np.ndarray:
    idx = np.clip((values * bins).astype(np.int64), 0, bins - 1)
    return np.bincount(idx, minlength=bins)


def sample_erdos(base: Optional[PisotBase], samples: int, N: int = 40,
                 seed: int = 0, bins: int = 256,
                 lebesgue_control: bool = False) -> EmpiricalMeasure:
    """Histogram of  scale * sum_{n<=N} x_n beta^-n  over i.i.d. uniform
    digit draws.

    The truncated tail is at most beta^-N exactly (the scale constant
    makes the full series sup equal 1), and must stay below a tenth of
    the bin width.  With ``lebesgue_control=True`` the map runs on the
    test-only dyadic case beta = d = 2 (not a valid Pisot base object),
    whose output must be uniform — a sanity anchor for the pipeline.
    """
    if lebesgue_control:
        beta_f, d, scale_f = 2.0, 2, 1.0
        label = "erdos-dyadic-control"
    else:
        if base is None:
            raise ValueError("a base is required outside the dyadic control")
        beta_f = base.beta_float()
        d = base.d
        scale_f = base.scale.to_float()
        label = "erdos"
    _check_truncation(beta_f, N, bins)
    rng = rng_for(seed, label)
    powers = beta_f ** -np.arange(1, N + 1)
    counts = np.zeros(bins, dtype=np.int64)
    done = 0
    while done < samples:
        take = min(_CHUNK, samples - done)
        digits = rng.integers(0, d, size=(take, N))
        vals = (digits @ powers) * scale_f
        counts += _hist(vals, bins)
        done += take
    return EmpiricalMeasure(tuple(int(c) for c in counts), int(samples),
                            seed, N, label)


def bc_to_erdos(base: PisotBase, x: float) -> float:
    """Affine change of variable from the symmetric convolution picture
    on [-1, 1] to the digit picture on [0, 1]: (beta-1)x/2 + 1/2."""
    if base.d != 2:
        raise WrongAlphabetError("the convolution picture needs d = 2")
    if not -1.0 <= x <= 1.0:
        raise ValueError("x must lie in [-1, 1]")
    return (base.beta_float() - 1.0) * x / 2.0 + 0.5


def invariant_estimate(base: PisotBase, samples: int, N: int = 48,
                       K: Optional[int] = None, seed: int = 0,
                       method: str = "two-sided", bins: int = 256,
                       offset: int = 64) -> EmpiricalMeasure:
    """Estimate the shift-invariant value distribution two ways.

    two-sided: feed random digit streams through the blockwise
    normalizer and read the value of the normalized stream at a deep
    offset (both the value and its one-shift are computed; only the
    former is histogrammed here).  Rows that fail to cover the read
    window within the generated length are redrawn deterministically.

    birkhoff: time-average along float orbits of x -> beta*x mod 1
    started from stationary-digit samples.
    """
    if method not in ("two-sided", "birkhoff"):
        raise ValueError("method must be 'two-sided' or 'birkhoff'")
    beta_f = base.beta_float()
    _check_truncation(beta_f, N, bins)
    if method == "birkhoff":
        return _birkhoff_estimate(base, samples, N, seed, bins)
    if K is None:
        K = estimate_K(base)

    scale_nums, den = base.scale.numerator_vector()
    kern = base.kernel
    row_len = offset + N + 6 * K + 40
    rng = rng_for(seed, "invariant-two-sided")
    counts = np.zeros(bins, dtype=np.int64)
    kept = 0
    dry_chunks = 0
    while kept < samples:
        take = min(_CHUNK // 4, samples - kept)
        rows = rng.integers(0, base.d, size=(take, row_len), dtype=np.int64)
        if K:
            # park 2K+1 zeros at the end so almost every row closes
            rows[:, -(2 * K + 1):] = 0
        vals = np.empty(take)
        got = 0
        for i in range(take):
            ok, val, _ = kern.stream_values(rows[i], scale_nums, den,
                                            K, offset, N)
            if ok:
                vals[got] = val
                got += 1
        counts += _hist(vals[:got], bins)
        kept += got
        dry_chunks = dry_chunks + 1 if got == 0 else 0
        if dry_chunks >= 3:
            raise TruncationTooCoarseError(
                "generated rows keep failing to cover the read window; "
                "increase the row slack")
    return EmpiricalMeasure(tuple(int(c) for c in counts), int(samples),
                            seed, N, "invariant-two-sided")


def _birkhoff_estimate(base: PisotBase, samples: int, N: int,
                       seed: int, bins: int) -> EmpiricalMeasure:
    """Thinned time averages along float orbits of the greedy map.

    Start values are digit series truncated at n_start places, so after
    n steps the orbit is exact only up to beta^(n - n_start) — and for a
    Pisot base the error is not noise but a systematic collapse toward
    integers once beta^n swallows the truncation.  Every recorded step
    therefore stays below n_start - log_beta(10*bins), with records
    thinned by about log_beta(bins) steps so hits decorrelate at bin
    scale; the start truncation is widened beyond N when the recording
    window needs it.
    """
    beta_f = base.beta_float()
    lb = math.log(beta_f)
    thin = max(4, math.ceil(math.log(4 * bins) / lb))
    records = 2
    burn = thin
    guard = math.ceil(math.log(10 * bins) / lb)
    n_start = max(N, burn + records * thin + guard)
    scale_f = base.scale.to_float()
    rng = rng_for(seed, "invariant-birkhoff")
    powers = beta_f ** -np.arange(1, n_start + 1)
    counts = np.zeros(bins, dtype=np.int64)
    remaining = int(samples)
    while remaining > 0:
        chunk = min(_CHUNK // 2, (remaining + records - 1) // records)
        digits = rng.integers(0, base.d, size=(chunk, n_start))
        x = (digits @ powers) * scale_f
        for _ in range(burn):
            x = (x * beta_f) % 1.0
        for _ in range(records):
            if remaining <= 0:
                break
            for _ in range(thin):
                x = (x * beta_f) % 1.0
            take = min(chunk, remaining)
            counts += _hist(x[:take], bins)
            remaining -= take
    return EmpiricalMeasure(tuple(int(c) for c in counts), int(samples),
                            seed, N, "invariant-birkhoff")


@dataclass(frozen=True)
class ShiftInvarianceReport:
    bins: int
    samples: int
    tv_shift: float        # estimate vs. its one-shift pushforward
    tv_split: float        # split-half resampling noise floor
    holds: bool            # tv_shift < tv_split


def shift_invariance_report(base: PisotBase, samples: int, N: int = 48,
                            K: Optional[int] = None, seed: int = 0,
                            bins: int = 64, offset: int = 64
                            ) -> ShiftInvarianceReport:
    """One blockwise-normalized run read at two adjacent offsets.

    Each covered row yields the value of the normalized stream at the
    deep offset and at the offset shifted by one; if the estimated law
    is shift-invariant, the two histograms differ by no more than
    resampling noise, which the split-half control measures on the
    same draws.
    """
    _check_truncation(base.beta_float(), N, bins)
    if K is None:
        K = estimate_K(base)
    scale_nums, den = base.scale.numerator_vector()
    kern = base.kernel
    row_len = offset + N + 6 * K + 40
    rng = rng_for(seed, "shift-invariance")
    vals = np.empty(int(samples))
    shifted = np.empty(int(samples))
    kept = 0
    dry_chunks = 0
    while kept < samples:
        take = min(_CHUNK // 4, int(samples) - kept)
        rows = rng.integers(0, base.d, size=(take, row_len), dtype=np.int64)
        if K:
            rows[:, -(2 * K + 1):] = 0
        got = 0
        for i in range(take):
            ok, v, vs = kern.stream_values(rows[i], scale_nums, den,
                                           K, offset, N)
            if ok:
                vals[kept + got] = v
                shifted[kept + got] = vs
                got += 1
        kept += got
        dry_chunks = dry_chunks + 1 if got == 0 else 0
        if dry_chunks >= 3:
            raise TruncationTooCoarseError(
                "generated rows keep failing to cover the read window")
    h_val = _hist(vals, bins) / samples
    h_shift = _hist(shifted, bins) / samples
    half = int(samples) // 2
    h_a = _hist(vals[:half], bins) / half
    h_b = _hist(vals[half:], bins) / (int(samples) - half)
    tv_shift = total_variation(h_val, h_shift)
    tv_split = total_variation(h_a, h_b)
    return ShiftInvarianceReport(bins=bins, samples=int(samples),
                                 tv_shift=tv_shift, tv_split=tv_split,
                                 holds=tv_shift < tv_split)


@dataclass(frozen=True)
class PiecewiseDensity:
    """Step density with exact endpoints (the orbit of 1 under the
    greedy map) and exact values; floats are derived views."""
    breakpoints: tuple[FieldElement, ...]   # interior piece boundaries
    values: tuple[FieldElement, ...]        # one per piece
    normalizer: FieldElement
    truncated: bool
    tail_bound: float

    def float_breaks(self) -> np.ndarray:
        return np.array([0.0] + [b.to_float() for b in self.breakpoints]
                        + [1.0])
    def float_values(self) -> np.ndarray:
        return np.array([v.to_float() for v in self.values])

    def bin_masses(self, bins: int) -> np.ndarray:
        """Exact-density mass of each uniform bin (float output)."""
        edges = np.linspace(0.0, 1.0, bins + 1)
        breaks = self.float_breaks()
        vals = self.float_values()
        cum_at = lambda t: np.sum(
            np.clip(np.minimum(t, breaks[1:]) - breaks[:-1], 0, None) * vals)
        cdf = np.array([cum_at(t) for t in edges])
        return np.diff(cdf)


def parry_density(base: PisotBase, orbit_budget: int = 256,
                  strict: bool = False) -> PiecewiseDensity:
    """Invariant step density of the greedy map, built from the orbit of 1.

    density(x)  ∝  sum over orbit points r_n > x of beta^-n,  r_0 = 1.
    When the orbit fails to close within the budget the series is
    truncated; the neglected mass is at most beta^-budget/(beta-1),
    reported in ``tail_bound`` (or raised, with ``strict=True``).
    """
    beta = base.beta_element()
    one = base.one()
    orbit: list[FieldElement] = []
    r = one
    truncated = False
    for _ in range(orbit_budget):
        scaled = r * beta
        dig = scaled.floor()
        r = scaled - base.from_rational(dig)
        if r.is_zero():
            break
        orbit.append(r)
    else:
        truncated = True
        if strict:
            raise OrbitNotFiniteError(
                f"orbit of 1 still open after {orbit_budget} steps")

    # pieces between sorted orbit points; density value on a piece is
    # sum of beta^-n over r_n strictly above it (r_0 = 1 included)
    uniq = {pt.coeffs: pt for pt in orbit}
    pts = sorted(uniq.values(), key=lambda e: e.to_float())
    binv = beta.inverse()
    dens: list[FieldElement] = []
    lows = [base.zero()] + pts
    for low in lows:
        total = base.one()          # r_0 = 1 always exceeds low < 1
        w = one
        for n, r in enumerate(orbit, start=1):
            w = w * binv
            if r.compare(low) > 0:
                total = total + w
        dens.append(total)
    normal = base.zero()
    breaks = lows[1:] + [one]
    for i, low in enumerate(lows):
        normal = normal + dens[i] * (breaks[i] - low)
    inv = normal.inverse()
    values = tuple(dv * inv for dv in dens)
    tail = 0.0
    if truncated:
        bf = base.beta_float()
        tail = bf ** (-orbit_budget) / (bf - 1.0)
    return PiecewiseDensity(breakpoints=tuple(pts), values=values,
                            normalizer=normal, truncated=truncated,
                            tail_bound=tail)


def parry_sample(base: PisotBase, density: PiecewiseDensity, samples: int,
                 seed: int = 0) -> np.ndarray:
    """Inverse-CDF draws from the step density (vectorized)."""
    breaks = density.float_breaks()
    vals = density.float_values()
    seg = np.diff(breaks) * vals
    cdf = np.concatenate([[0.0], np.cumsum(seg)])
    cdf[-1] = 1.0
    rng = rng_for(seed, "parry-sample")
    u = rng.random(int(samples))
    piece = np.searchsorted(cdf, u, side="right") - 1
    piece = np.clip(piece, 0, len(vals) - 1)
    return breaks[piece] + (u - cdf[piece]) / vals[piece]


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


@dataclass(frozen=True)
class SingularityReport:
    resolutions: tuple[int, ...]          # finest first
    tv: tuple[float, ...]
    nondecreasing_under_refinement: bool
    tv_at_finest: float


def singularity_diagnostic(nu: EmpiricalMeasure, parry: PiecewiseDensity,
                           refinements: int = 3) -> SingularityReport:
    """Total-variation distance to the absolutely continuous baseline at
    a ladder of dyadic resolutions.

    Genuine mutual singularity shows up as TV bounded away from zero
    and non-decreasing as bins get finer; a distance that melts away
    under coarsening-aware resampling is just noise.  This is a
    diagnostic signature, never a proof.
    """
    if nu.bins < (1 << refinements):
        raise ValueError("histogram too coarse for that many refinements")
    res, tvs = [], []
    for lev in range(refinements + 1):
        m = nu.coarsen(lev) if lev else nu
        tvs.append(total_variation(m.probabilities(),
                                   parry.bin_masses(m.bins)))
        res.append(m.bins)
    mono = all(a >= b - 1e-12 for a, b in zip(tvs, tvs[1:]))
    return SingularityReport(resolutions=tuple(res), tv=tuple(tvs),
                             nondecreasing_under_refinement=mono,
                             tv_at_finest=tvs[0])


@dataclass(frozen=True)
class OverlapReport:
    bins: int
    threshold: float
    violations: tuple[int, ...]   # bins where exactly one side has mass
    present_left: tuple[bool, ...]
    present_right: tuple[bool, ...]


def measure_overlap_violations(left: EmpiricalMeasure,
                               right: EmpiricalMeasure,
                               sigma: float = 5.0) -> OverlapReport:
    """Bins where one histogram sits above the noise threshold while the
    other sits below it — the bin-scale signature of a failure of
    mutual absolute continuity."""
    if left.bins != right.bins:
        raise ValueError("histograms must share a bin count")
    bins = left.bins
    thr_l = sigma * math.sqrt(left.total / bins)
    thr_r = sigma * math.sqrt(right.total / bins)
    pl, pr, bad = [], [], []
    for i in range(bins):
        a = left.counts[i] >= thr_l
        b = right.counts[i] >= thr_r
        pl.append(a)
        pr.append(b)
        if a != b:
            bad.append(i)
    return OverlapReport(bins=bins, threshold=float(sigma),
                         violations=tuple(bad),
                         present_left=tuple(pl), present_right=tuple(pr))


def quasi_invariance_check(base: PisotBase, mu: EmpiricalMeasure,
                           seed: int = 0) -> OverlapReport:
    """Push fresh stationary-digit samples through one greedy-map step
    and compare support patterns against ``mu`` at the same bins."""
    beta_f = base.beta_float()
    N = mu.truncation
    rng = rng_for(seed, "quasi-invariance")
    powers = beta_f ** -np.arange(1, N + 1)
    scale_f = base.scale.to_float()
    counts = np.zeros(mu.bins, dtype=np.int64)
    done = 0
    while done < mu.total:
        take = min(_CHUNK, mu.total - done)
        digits = rng.integers(0, base.d, size=(take, N))
        vals = ((digits @ powers) * scale_f * beta_f) % 1.0
        counts += _hist(vals, mu.bins)
        done += take
    pushed = EmpiricalMeasure(tuple(int(c) for c in counts), mu.total,
                              seed, N, "erdos-pushforward")
    return measure_overlap_violations(mu, pushed)
