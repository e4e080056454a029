"""Acceptance gate.

Eleven binding checks at their stated scales and tolerances.  Each test
prints exactly one PASS/FAIL line and asserts the same condition, so the
gate reads the same from the log and from the exit code.  Shared corpora
are built once in module-scoped fixtures; their build time is charged to
the criterion that owns the runtime budget.
"""

import math
import random
import time

import pytest

from betalab import (
    PeriodicWord,
    coordinate_maps,
    gamma_experiment,
    invariant_estimate,
    is_admissible,
    killer_suffix,
    normalize_finite,
    parry_density,
    parry_sample,
    quasi_greedy_one,
    quasi_invariance_check,
    sample_erdos,
    scaled_word_value,
    shift_invariance_report,
    torus_check,
    total_variation,
    two_sided_normalize,
    wf_check,
    word_value,
)
from betalab.fixtures import FIXTURES
from betalab.measures import EmpiricalMeasure, measure_overlap_violations
from betalab.rng import rng_for
from conftest import blockwise_window, finite_normalizing_word

import numpy as np


def _report(num: int, name: str, ok: bool, detail: str = "") -> None:
    tail = f" ({detail})" if detail else ""
    print(f"[acceptance {num:02d}] {name}: {'PASS' if ok else 'FAIL'}{tail}")
    assert ok, f"{name}{tail}"


# ---- shared corpora ---------------------------------------------------------

@pytest.fixture(scope="module")
def normalized_corpus(unit_bases):
    """1000 seeded random words per base, normalized once; elapsed time
    is charged to the value-preservation budget."""
    rng = random.Random(2026)
    t0 = time.monotonic()
    out = {}
    for name, (base, _K) in unit_bases.items():
        words, results = [], []
        for _ in range(1000):
            w = [rng.randrange(base.d) for _ in range(rng.randrange(1, 25))]
            words.append(w)
            results.append(normalize_finite(base, w))
        out[name] = (words, results)
    return out, time.monotonic() - t0


@pytest.fixture(scope="module")
def torus_windows(unit_bases):
    """100 seeded blockwise windows split across the three unit bases."""
    rng = random.Random(808)
    wins = []
    counts = {"golden-d2": 34, "golden-d3": 33, "tribonacci-d2": 33}
    for name, (base, K) in unit_bases.items():
        for _ in range(counts[name]):
            window, left = blockwise_window(base, K, rng)
            wins.append((name, base, K, window, left))
    return wins


@pytest.fixture(scope="module")
def wf_reports(unit_bases):
    return {name: wf_check(base) for name, (base, _K) in unit_bases.items()}


# ---- the gate ---------------------------------------------------------------

def test_01_exact_value_preservation(normalized_corpus, unit_bases):
    corpus, elapsed = normalized_corpus
    bad = 0
    for name, (base, _K) in unit_bases.items():
        for w, nw in zip(*corpus[name]):
            if word_value(base, nw.word) != scaled_word_value(base, w):
                bad += 1
    ok = bad == 0 and elapsed < 60.0
    _report(1, "exact value preservation", ok,
            f"3000 words, {bad} mismatches, {elapsed:.1f}s")


def test_02_admissibility(normalized_corpus, torus_windows, unit_bases):
    corpus, _ = normalized_corpus
    bad = 0
    for name, (base, _K) in unit_bases.items():
        for nw in corpus[name][1]:
            if not is_admissible(base, nw.word):
                bad += 1
    for _name, base, K, window, left in torus_windows:
        out = two_sided_normalize(base, window, left, K)
        if not is_admissible(base, out.digits):
            bad += 1
    _report(2, "admissibility of normalizer outputs", bad == 0,
            f"3000 one-sided + 100 two-sided, {bad} failures")


def test_03_quasi_greedy_fixtures(golden2, trib2):
    qg = quasi_greedy_one(golden2)
    qt = quasi_greedy_one(trib2)
    ok = (qg == PeriodicWord((), (1, 0)) and
          word_value(golden2, qg) == golden2.one() and
          qt == PeriodicWord((), (1, 1, 0)) and
          word_value(trib2, qt) == trib2.one())
    _report(3, "quasi-greedy expansions of 1", ok,
            "golden (10)^inf, tribonacci (110)^inf, both value exactly 1")


def test_04_killer_suffix_finiteness(wf_reports, unit_bases):
    rng = random.Random(44)
    bad = 0
    for name, (base, _K) in unit_bases.items():
        L = wf_reports[name].L
        for _ in range(200):
            prefix = tuple(rng.randrange(base.d)
                           for _ in range(rng.randrange(1, 16)))
            s = killer_suffix(base, prefix, max_len=L)
            if not normalize_finite(base, prefix + s).is_finite:
                bad += 1
    _report(4, "killer suffixes force finiteness", bad == 0,
            f"200 prefixes x 3 bases, L from the reports, {bad} failures")


def test_05_survival_decay_bound(wf_reports, unit_bases):
    t0 = time.monotonic()
    bad = 0
    for name, (base, _K) in unit_bases.items():
        L = wf_reports[name].L
        tab = gamma_experiment(base, L, n_max=60, samples=100_000, seed=1)
        for obs, bnd in zip(tab.observed, tab.bound):
            sigma = math.sqrt(bnd * (1 - bnd) / tab.samples)
            if obs > bnd + 3 * sigma + 1 / tab.samples:
                bad += 1
    elapsed = time.monotonic() - t0
    ok = bad == 0 and elapsed < 300.0
    _report(5, "survival fraction under the decay bound", ok,
            f"1e5 samples, n<=60, 3 bases, {bad} exceedances, {elapsed:.1f}s")


def test_06_concatenation(unit_bases):
    rng = random.Random(66)
    bad = 0
    for name, (base, K) in unit_bases.items():
        for _ in range(200):
            w1 = finite_normalizing_word(base, K, rng)
            w2 = finite_normalizing_word(base, K, rng)
            whole = normalize_finite(base, w1 + [0] * (2 * K) + w2).word
            left = normalize_finite(base, w1 + [0] * K).word.pre
            right = normalize_finite(base, [0] * K + w2).word.pre
            slot = len(w1) + K
            glued = left + (0,) * (slot - len(left)) + right
            if whole != PeriodicWord(glued, ()):
                bad += 1
    _report(6, "concatenation across zero gaps", bad == 0,
            f"200 pairs x 3 bases, {bad} mismatches")


def test_07_head_exchange_identities(golden2, golden3):
    rng = random.Random(77)
    bad = 0
    for base in (golden2, golden3):
        for _ in range(50):
            window, left = blockwise_window(base, 1, rng)
            cm = coordinate_maps(base, window, left, K=1)
            if not cm.identities_hold:
                bad += 1
    _report(7, "head-exchange identities", bad == 0,
            f"100 blockwise windows (golden d=2 and d=3), {bad} failures")


def test_08_torus_cross_check(torus_windows):
    worst = 0.0
    bad = 0
    for _name, base, _K, window, left in torus_windows:
        chk = torus_check(base, window, left, precision=1e-10)
        worst = max(worst, chk.residual)
        if chk.residual >= 1e-8:
            bad += 1
    _report(8, "torus functional cross-check", bad == 0,
            f"100 windows, worst residual {worst:.2e}")


def test_09_shift_invariance(golden2):
    rep = shift_invariance_report(golden2, 100_000, bins=64, seed=9)
    _report(9, "shift invariance of the two-sided estimate", rep.holds,
            f"tv_shift {rep.tv_shift:.4f} < split-half floor "
            f"{rep.tv_split:.4f}")


def test_10_singularity_signature(golden2):
    frozen = FIXTURES["singularity"]
    ref = frozen["reference"]
    t0 = time.monotonic()
    nu = invariant_estimate(golden2, ref["samples"], N=48,
                            seed=ref["seed"], bins=128)
    parry = parry_density(golden2)
    tv128 = total_variation(nu.probabilities(), parry.bin_masses(128))
    tv64 = total_variation(nu.coarsen().probabilities(),
                           parry.bin_masses(64))
    draws = parry_sample(golden2, parry, ref["samples"], seed=ref["seed"])
    counts = np.bincount(np.clip((draws * 128).astype(int), 0, 127),
                         minlength=128)
    control = total_variation(counts / counts.sum(), parry.bin_masses(128))
    elapsed = time.monotonic() - t0
    thr = frozen["threshold"]
    ok = (tv128 >= thr and tv128 >= tv64 - 1e-12 and
          control < thr / 2 and elapsed < 600.0)
    _report(10, "singular vs absolutely continuous signature", ok,
            f"TV@128 {tv128:.4f} >= {thr}, TV@64 {tv64:.4f}, "
            f"control {control:.4f}, {elapsed:.0f}s")


def test_11_quasi_invariance(golden2):
    mu = sample_erdos(golden2, 1_000_000, bins=64, seed=1)
    rep = quasi_invariance_check(golden2, mu, seed=5)

    rng = rng_for(5, "adversarial-squeeze")
    vals = rng.random(mu.total) / 2.0
    counts = np.bincount((vals * 64).astype(int), minlength=64)
    squeezed = EmpiricalMeasure(tuple(int(c) for c in counts), mu.total,
                                5, mu.truncation, "adversarial")
    adversarial = measure_overlap_violations(mu, squeezed)
    ok = rep.violations == () and len(adversarial.violations) > 0
    _report(11, "quasi-invariance under one shift step", ok,
            f"{len(rep.violations)} violations, adversarial control "
            f"{len(adversarial.violations)}")
