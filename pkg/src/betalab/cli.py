"""Command-line front end.

File formats
------------
base JSON        {"minpoly": [c0, ..., 1], "d": int}
word JSON        {"pre": [...], "per": [...]}
histogram CSV    header ``bin_left,bin_right,count``, one row per bin
stream file      one ASCII digit per byte (whitespace ignored)
field elements   "p0/q0,p1/q1,..." over the power basis; a single
                 rational like "3/4" is shorthand for a constant

Exit codes: 0 success, 2 validation problem, 3 exhausted budget or
search, 1 anything else.  Machine-readable output goes to stdout or to
``--out`` files (written atomically); messages for humans go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import (BetalabError, BudgetExceededError, ConfigError,
                     HomoclinicDecayTooSlowError, SearchExhaustedError,
                     StateBudgetError)
from .expansion import greedy_expand
from .field import PisotBase, make_base
from .fixtures import fixture_hash
from .measures import (EmpiricalMeasure, invariant_estimate, parry_density,
                       quasi_invariance_check, sample_erdos,
                       singularity_diagnostic, total_variation)
from .normalize import block_split, estimate_K, normalize_finite
from .torus import torus_check
from .wf import KillerCertificate, gamma_experiment, wf_check
from .words import PeriodicWord

_BUDGET_ERRORS = (BudgetExceededError, StateBudgetError,
                  SearchExhaustedError, HomoclinicDecayTooSlowError)


# ---------------------------------------------------------------------------
# parsing and serialization helpers
# ---------------------------------------------------------------------------

def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON in {path}: {e}")


def _load_base(path: str) -> PisotBase:
    data = _load_json(path)
    extra = set(data) - {"minpoly", "d"}
    if extra:
        raise ConfigError(f"unknown keys in base file: {sorted(extra)}")
    if "minpoly" not in data or "d" not in data:
        raise ConfigError("base file needs 'minpoly' and 'd'")
    return make_base([int(c) for c in data["minpoly"]], int(data["d"]))


def _parse_digits(text: str) -> tuple[int, ...]:
    text = text.strip()
    parts = text.split(",") if "," in text else list(text)
    try:
        return tuple(int(p) for p in parts if p.strip() != "")
    except ValueError:
        raise ConfigError(f"cannot parse digit word {text!r}")


def _parse_element(base: PisotBase, text: str):
    parts = [p.strip() for p in text.split(",")]
    try:
        coeffs = [Fraction(p) for p in parts]
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"cannot parse field element {text!r}")
    if len(coeffs) == 1:
        return base.from_rational(coeffs[0])
    if len(coeffs) != base.degree:
        raise ConfigError(
            f"need 1 or {base.degree} coefficients, got {len(coeffs)}")
    return base.element(coeffs)


def _read_stream(path: str) -> tuple[int, ...]:
    try:
        raw = Path(path).read_text(encoding="ascii")
    except FileNotFoundError:
        raise ConfigError(f"file not found: {path}")
    digits = []
    for ch in raw:
        if ch.isspace():
            continue
        if not ch.isdigit():
            raise ConfigError(f"stream byte {ch!r} is not a digit")
        digits.append(int(ch))
    return tuple(digits)


def _word_json(w: PeriodicWord) -> dict:
    return {"pre": list(w.pre), "per": list(w.per)}


def _atomic_write(path: str, text: str) -> None:
    target = Path(path)
    tmp = target.with_name(target.name + f".tmp{os.getpid()}")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, target)


def _emit(text: str, out: str | None) -> None:
    if out:
        _atomic_write(out, text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _hist_csv(m: EmpiricalMeasure) -> str:
    lines = ["bin_left,bin_right,count"]
    for i, c in enumerate(m.counts):
        lines.append(f"{i / m.bins:.17g},{(i + 1) / m.bins:.17g},{c}")
    return "\n".join(lines) + "\n"


def _read_hist_csv(path: str) -> EmpiricalMeasure:
    try:
        lines = Path(path).read_text(encoding="utf-8").strip().splitlines()
    except FileNotFoundError:
        raise ConfigError(f"file not found: {path}")
    if not lines or lines[0].strip() != "bin_left,bin_right,count":
        raise ConfigError(f"{path} is not a histogram CSV")
    counts = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != 3:
            raise ConfigError(f"bad histogram row: {ln!r}")
        counts.append(int(cells[2]))
    total = sum(counts)
    return EmpiricalMeasure(tuple(counts), total, 0, 0, f"file:{path}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_expand(args) -> int:
    base = _load_base(args.base)
    x = _parse_element(base, args.x)
    w = greedy_expand(base, x, max_states=args.budget)
    _emit(_dump(_word_json(w)), args.out)
    return 0


def _cmd_normalize(args) -> int:
    base = _load_base(args.base)
    digits = _parse_digits(args.word)
    nw = normalize_finite(base, digits, max_states=args.budget)
    _emit(_dump(_word_json(nw.word)), args.out)
    return 0


def _cmd_blocks(args) -> int:
    base = _load_base(args.base)
    stream = _read_stream(args.stream)
    K = args.K if args.K is not None else estimate_K(base)
    dec = block_split(base, stream, K, budget=args.budget)
    payload = {
        "K": K,
        "cut_points": list(dec.cut_points),
        "consumed": dec.consumed,
        "blocks": [list(b) for b in dec.blocks],
        "normalized_blocks": [list(nb) for nb in dec.normalized_blocks],
    }
    _emit(_dump(payload), args.out)
    return 0


def _cmd_wf_check(args) -> int:
    base = _load_base(args.base)
    rep = wf_check(base, max_killer_len=args.max_killer_len, seed=args.seed)
    killers = []
    for k in rep.killers:
        if isinstance(k, KillerCertificate):
            killers.append({
                "kind": "additive",
                "f": list(k.f),
                "proof": _word_json(k.proof),
            })
        else:
            killers.append({
                "kind": "suffix",
                "witness": list(k.witness_prefix),
                "suffix": list(k.suffix),
                "proof": _word_json(k.proof),
            })
    payload = {
        "status": rep.status,
        "L1_estimate": rep.L1_estimate,
        "L2": rep.L2,
        "p": rep.p,
        "L": rep.L,
        "periods": [list(pw.per) for pw in rep.periods],
        "killers": killers,
    }
    _emit(_dump(payload), args.out)
    return 0


def _cmd_gamma(args) -> int:
    base = _load_base(args.base)
    L = args.L
    if L is None:
        L = wf_check(base, seed=args.seed).L
    t = gamma_experiment(base, L, n_max=args.n_max, samples=args.samples,
                         seed=args.seed)
    lines = ["n,observed,bound"]
    for n, obs, bnd in zip(t.n, t.observed, t.bound):
        lines.append(f"{n},{obs:.10g},{bnd:.10g}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


_SIM_KEYS = {"estimator", "samples", "bins", "N", "K", "seed", "method"}


def _cmd_simulate(args) -> int:
    base = _load_base(args.base)
    cfg = _load_json(args.config)
    extra = set(cfg) - _SIM_KEYS
    if extra:
        raise ConfigError(f"unknown config keys: {sorted(extra)}")
    estimator = cfg.get("estimator", "erdos")
    samples = int(cfg.get("samples", 100_000))
    bins = int(cfg.get("bins", 256))
    N = int(cfg.get("N", 40))
    seed = int(cfg.get("seed", args.seed))
    if estimator == "erdos":
        m = sample_erdos(base, samples, N=N, seed=seed, bins=bins)
    elif estimator in ("two-sided", "birkhoff"):
        m = invariant_estimate(base, samples, N=max(N, 48),
                               K=cfg.get("K"), seed=seed,
                               method=estimator, bins=bins)
    else:
        raise ConfigError(f"unknown estimator {estimator!r}")
    report = {
        "estimator": m.estimator,
        "samples": m.total,
        "bins": m.bins,
        "seed": seed,
        "truncation": m.truncation,
    }
    _emit(_hist_csv(m), args.out)
    if args.report:
        _atomic_write(args.report, _dump(report))
    return 0


def _cmd_parry(args) -> int:
    base = _load_base(args.base)
    pd = parry_density(base)
    payload = {
        "breakpoints": [float(b) for b in pd.float_breaks()[1:-1]],
        "densities": [float(v) for v in pd.float_values()],
        "normalizer": pd.normalizer.to_float(),
        "truncated": pd.truncated,
        "tail_bound": pd.tail_bound,
    }
    _emit(_dump(payload), args.out)
    return 0


def _cmd_diagnose(args) -> int:
    left = _read_hist_csv(args.left)
    right = _read_hist_csv(args.right)
    if left.bins != right.bins:
        raise ConfigError("histograms must share a bin count")
    levels = min(args.refinements,
                 max(0, left.bins.bit_length() - 1))
    ladder = []
    a, b = left, right
    for lev in range(levels + 1):
        if lev:
            a, b = a.coarsen(1), b.coarsen(1)
        ladder.append({"bins": a.bins,
                       "tv": total_variation(a.probabilities(),
                                             b.probabilities())})
    tvs = [row["tv"] for row in ladder]
    payload = {
        "resolutions": ladder,
        "nondecreasing_under_refinement":
            all(x >= y - 1e-12 for x, y in zip(tvs, tvs[1:])),
        "tv_at_finest": tvs[0],
    }
    _emit(_dump(payload), args.out)
    return 0


def _cmd_torus_check(args) -> int:
    base = _load_base(args.base)
    window = _parse_digits(args.window)
    res = torus_check(base, window, args.left_index,
                      precision=args.precision)
    payload = {
        "residual": res.residual,
        "terms_used": res.terms_used,
        "tail_bound": res.tail_bound,
        "point_normalized": list(res.point_normalized),
        "point_raw": list(res.point_raw),
    }
    _emit(_dump(payload), args.out)
    return 0


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="betalab",
        description="Exact digit arithmetic and measure experiments "
                    "in Pisot bases.")
    p.add_argument("--version", action="version",
                   version=f"betalab {__version__}+fixtures.{fixture_hash()}")
    p.add_argument("--threads", type=int, default=1,
                   help="worker cap (default 1: reproducibility first)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, **kw)
        sp.set_defaults(fn=fn)
        sp.add_argument("--out", help="write output here (atomic)")
        return sp

    sp = add("expand", _cmd_expand, help="greedy expansion of a field value")
    sp.add_argument("--base", required=True)
    sp.add_argument("--x", required=True,
                    help='field element, e.g. "1/2" or "0,1/3"')
    sp.add_argument("--budget", type=int, default=100_000)

    sp = add("normalize", _cmd_normalize,
             help="admissible expansion of a digit word's scaled value")
    sp.add_argument("--base", required=True)
    sp.add_argument("--word", required=True, help='digits, e.g. "11" or "1,1"')
    sp.add_argument("--budget", type=int, default=100_000)

    sp = add("blocks", _cmd_blocks, help="blockwise split of a stream file")
    sp.add_argument("--base", required=True)
    sp.add_argument("--stream", required=True)
    sp.add_argument("--K", type=int, default=None)
    sp.add_argument("--budget", type=int, default=100_000)

    sp = add("wf-check", _cmd_wf_check, help="weak-finitarity report")
    sp.add_argument("--base", required=True)
    sp.add_argument("--max-killer-len", type=int, default=12)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("gamma", _cmd_gamma, help="decay of unfinished-prefix fraction")
    sp.add_argument("--base", required=True)
    sp.add_argument("--L", type=int, default=None,
                    help="repair bound; computed by wf-check when omitted")
    sp.add_argument("--n-max", type=int, default=60)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=1)

    sp = add("simulate", _cmd_simulate,
             help="sample a measure (JSON config) into a histogram CSV")
    sp.add_argument("--base", required=True)
    sp.add_argument("--config", required=True)
    sp.add_argument("--report", help="also write a JSON run report here")
    sp.add_argument("--seed", type=int, default=0)

    sp = add("parry", _cmd_parry, help="piecewise invariant density")
    sp.add_argument("--base", required=True)

    sp = add("diagnose", _cmd_diagnose,
             help="total-variation ladder between two histogram files")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--refinements", type=int, default=3)

    sp = add("torus-check", _cmd_torus_check,
             help="compare torus sums of a window and its normalization")
    sp.add_argument("--base", required=True)
    sp.add_argument("--window", required=True)
    sp.add_argument("--left-index", type=int, default=1)
    sp.add_argument("--precision", type=float, default=1e-10)

    return p


def dispatch(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except _BUDGET_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (BetalabError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
