"""Torus-side cross-check of normalization for unit Pisot bases.

The recurrence matrix M (companion matrix of the minimal polynomial) acts
on the m-torus.  A homoclinic point built from the stable projection of a
lattice vector lets both digit streams be summed into torus points:

    F(eps)  = sum_n eps_n T^-n t        (beta-admissible stream)
    G(x)    = sum_n x_n  T^-n t~        (raw d-stream)

with the twisted pair  t = pi((d-1) Ps e1),  t~ = pi((M-I) Ps e1).  For a
finitely supported window x and its normalization eps, F(eps) = G(x) on
the nose: the lifted difference is (d-1)*sum eps_n beta^-n minus
(beta-1)*sum x_n beta^-n times the unstable direction (zero, because
normalization preserves the scaled value) plus an integer vector.  The
check below evaluates both sides by truncated sums and reports the max
coordinate distance on the torus, which should sit at embedding-precision
level, far below any honest tolerance.

Everything up to the final embedding is exact field arithmetic; mpmath
enters only to print/compare real numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import mpmath as mp

from .errors import HomoclinicDecayTooSlowError, NotUnitError
from .field import FieldElement, PisotBase
from .normalize import normalize_finite

_WORK_DPS = 40


def companion_matrix(base: PisotBase) -> tuple[tuple[int, ...], ...]:
    """Integer recurrence matrix: first row k_1..k_m, subdiagonal ones."""
    m = base.degree
    rows = [tuple(base.recurrence)]
    for i in range(1, m):
        rows.append(tuple(1 if j == i - 1 else 0 for j in range(m)))
    return tuple(rows)


def _apply_m(base: PisotBase, v: list[FieldElement]) -> list[FieldElement]:
    rec = base.recurrence
    m = base.degree
    top = v[0] * rec[0]
    for j in range(1, m):
        top = top + v[j] * rec[j]
    return [top] + v[: m - 1]


def _apply_m_inverse(base: PisotBase, v: list[FieldElement]
                     ) -> list[FieldElement]:
    """Solve M w = v; integer because |k_m| = 1."""
    rec = base.recurrence
    m = base.degree
    w = list(v[1:]) + [base.zero()]
    acc = v[0]
    for j in range(m - 1):
        acc = acc - w[j] * rec[j]
    w[m - 1] = acc * rec[m - 1]          # 1/k_m == k_m for k_m = +-1
    return w


def unstable_left_vector(base: PisotBase) -> list[FieldElement]:
    """Left beta-eigenvector of M, exactly: l_1 = 1, l_{j+1} = b*l_j - k_j."""
    beta = base.beta_element()
    l = [base.one()]
    for j in range(base.degree - 1):
        l.append(l[-1] * beta - base.from_rational(base.recurrence[j]))
    return l


def stable_part_of_e1(base: PisotBase) -> list[FieldElement]:
    """Ps e1 = e1 - Pu e1 with Pu = vu l^T / (l^T vu), all exact."""
    m = base.degree
    vu = [base.beta_pow(m - 1 - i) for i in range(m)]
    l = unstable_left_vector(base)
    denom = base.zero()
    for a, b in zip(l, vu):
        denom = denom + a * b
    inv = denom.inverse()
    pu_e1 = [vu[i] * l[0] * inv for i in range(m)]
    out = []
    for i in range(m):
        e = base.one() if i == 0 else base.zero()
        out.append(e - pu_e1[i])
    return out


def homoclinic_lifts(base: PisotBase
                     ) -> tuple[list[FieldElement], list[FieldElement]]:
    """Exact lattice lifts of the twisted pair (t, t~)."""
    if not base.is_unit:
        raise NotUnitError(
            "homoclinic construction needs |constant term| = 1")
    ps = stable_part_of_e1(base)
    t = [p * (base.d - 1) for p in ps]
    mps = _apply_m(base, ps)
    tt = [mps[i] - ps[i] for i in range(base.degree)]
    return t, tt


def _frac_mpf(el: FieldElement) -> mp.mpf:
    return el.to_mpf(_WORK_DPS) - el.floor()


def _torus_distance(a, b) -> float:
    d = abs(mp.frac(a - b))
    return float(min(d, 1 - d))


def torus_apply(base: PisotBase, point: Sequence[float]) -> tuple[float, ...]:
    """One step of the toral map: y -> M y mod 1 (numeric convenience)."""
    rec = base.recurrence
    m = base.degree
    top = sum(rec[j] * point[j] for j in range(m))
    out = [top % 1.0] + [point[i] % 1.0 for i in range(m - 1)]
    return tuple(out)


@dataclass(frozen=True)
class TorusCheck:
    residual: float
    terms_used: int
    tail_bound: float
    point_normalized: tuple[float, ...]
    point_raw: tuple[float, ...]


def _functional(base: PisotBase, lift: list[FieldElement],
                digit_at, n_lo: int, n_hi: int):
    """sum_{n=n_lo}^{n_hi} digit(n) * (M^-n lift) embedded coordinatewise.

    Walks n upward applying M^-1 exactly once per step; each term is
    reduced mod 1 before embedding so the working precision only has to
    absorb one power of beta at a time.
    """
    m = base.degree
    vec = list(lift)
    for _ in range(-n_lo):
        vec = _apply_m(base, vec)
    for _ in range(n_lo):
        vec = _apply_m_inverse(base, vec)
    total = [mp.mpf(0)] * m
    n = n_lo
    while n <= n_hi:
        dig = digit_at(n)
        if dig:
            for i in range(m):
                total[i] += dig * _frac_mpf(vec[i])
        if n < n_hi:
            vec = _apply_m_inverse(base, vec)
        n += 1
    return [mp.frac(c) for c in total]


def torus_check(base: PisotBase, window: Sequence[int], left_index: int,
                precision: float = 1e-10,
                max_terms: int = 10_000) -> TorusCheck:
    """Compare the two torus sums on a finite window; small is good.

    The raw side sums over the window itself; the normalized side sums
    over the window's normalization, truncated once the geometric tail
    bound  digit_max * C * rho^N / (1 - rho)  drops below precision/10
    (rho = 1/beta).  If that would take more than ``max_terms`` terms the
    decay is declared too slow rather than silently under-resolved.
    """
    if not base.is_unit:
        raise NotUnitError("torus check is defined for unit bases only")
    window = tuple(window)
    with mp.workdps(_WORK_DPS):
        t_lift, tt_lift = homoclinic_lifts(base)

        # normalization of the window, aligned at left_index
        nw = normalize_finite(base, window)
        eps = nw.word

        n_lo = left_index
        n_hi_raw = left_index + len(window) - 1

        # truncation point for the (possibly periodic) normalized stream
        if eps.is_finite:
            n_hi_eps = n_lo + eps.preperiod_length - 1
            tail = 0.0
            if n_hi_eps - n_lo >= max_terms:
                raise HomoclinicDecayTooSlowError(
                    f"finite normalization longer than {max_terms} digits")
        else:
            ps = stable_part_of_e1(base)
            c_mag = base.digit_bound * (base.d - 1) * (
                1 + max(abs(el.to_float()) for el in ps))
            rho = 1.0 / base.beta_float()
            n_hi_eps = max(n_hi_raw, n_lo - 1, 0)
            tail = c_mag * rho ** (n_hi_eps + 1) / (1 - rho)
            while tail >= precision / 10:
                n_hi_eps += 1
                if n_hi_eps - n_lo > max_terms:
                    raise HomoclinicDecayTooSlowError(
                        f"tail bound stuck above {precision / 10:g} after "
                        f"{max_terms} terms")
                tail = c_mag * rho ** (n_hi_eps + 1) / (1 - rho)

        point_eps = _functional(
            base, t_lift, lambda n: eps.digit(n - left_index),
            n_lo, max(n_hi_eps, n_lo - 1))
        point_raw = _functional(
            base, tt_lift,
            lambda n: window[n - left_index]
            if 0 <= n - left_index < len(window) else 0,
            n_lo, n_hi_raw)

        residual = max(_torus_distance(a, b)
                       for a, b in zip(point_eps, point_raw))
        return TorusCheck(
            residual=residual,
            terms_used=max(n_hi_eps, n_hi_raw) - n_lo + 1,
            tail_bound=tail,
            point_normalized=tuple(float(mp.frac(c)) for c in point_eps),
            point_raw=tuple(float(mp.frac(c)) for c in point_raw),
        )
