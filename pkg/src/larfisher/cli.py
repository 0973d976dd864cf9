"""Command-line interface: ``larfisher {fit,simulate,reproduce,oracle-check}``.

Exit codes: 0 success, 1 verification failure, 2 statistical degeneracy
(separation or a singular Hessian), 3 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .estimation import DIVERGED, FitConfig, NumericalError, fit_mle
from .exact import (
    MAX_ENUMERATION,
    EnumerationSizeError,
    decode_state,
    ex_fi_bruteforce,
    ex_fi_forward,
    ex_fi_functional_iteration,
    ex_fi_lar1_closed_form,
    initial_state,
    qt_forward,
)
from .io import (
    PanelData,
    PanelParseError,
    config_hash,
    dump_json,
    manifest,
    parse_threshold,
    read_panel,
    write_panel,
    write_qt_csv,
    write_rows_csv,
)
from .model import ModelSpec
from .montecarlo import InitialPolicy, make_rng, simulate_series
from .report import format_result, parse_functional, result_document
from .studies import STUDIES, StudyOptions, run_study

log = logging.getLogger("larfisher")

EXIT_OK, EXIT_VERIFY, EXIT_SEPARATION, EXIT_INPUT = 0, 1, 2, 3
ORACLE_TOL = 1e-10
_SIMULATE_STREAM = 3000


class InputError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"expected a comma-separated list of integers, got {text!r}") from None


# ---------------------------------------------------------------- fit


def cmd_fit(args) -> int:
    try:
        data = read_panel(args.data)
    except OSError as exc:
        raise InputError(f"cannot read {args.data}: {exc}") from None
    for th in args.threshold or []:
        col, cut = parse_threshold(th)
        data = data.with_threshold(col, cut)
    covariates = data.covariate_names if args.covariates is None else [c for c in args.covariates.split(",") if c]
    spec = ModelSpec(p=args.p, l=len(covariates))
    panel = data.to_panel(spec, covariates)
    functionals = [(text, parse_functional(text, spec, covariates)) for text in args.functional or []]
    sources = ["exact", "empirical"] if args.fi == "both" else [args.fi]

    config = FitConfig(max_iter=args.max_iter, grad_tol=args.grad_tol)
    fit = fit_mle(panel, config)
    resolved = {
        "command": "fit",
        "data": str(args.data),
        "p": args.p,
        "covariates": covariates,
        "thresholds": args.threshold or [],
        "level": args.level,
        "fi": args.fi,
        "functionals": [t for t, _ in functionals],
        "fit_config": vars(config).copy(),
        "seed": args.seed,
    }
    meta = {"version": __version__, "seed": args.seed, "config": resolved, "config_hash": config_hash(resolved)}
    doc = result_document(fit, covariates, args.level, sources, functionals,
                          len(panel), panel.n_observations, meta)
    sys.stdout.write(format_result(doc))
    if args.out:
        Path(args.out).write_text(dump_json(doc), encoding="utf-8", newline="\n")
    if args.dump_qt:
        traj = [(s.id, spec.p + 1, qt_forward(fit.theta_hat, spec, initial_state(s.y, spec.p), s.y.size, s.x))
                for s in panel.subjects]
        write_qt_csv(args.dump_qt, traj)
    if fit.status == DIVERGED:
        sys.stderr.write("SEPARATION: the likelihood has no finite maximizer; estimates are the last iterate\n")
        return EXIT_SEPARATION
    return EXIT_OK


# ---------------------------------------------------------------- simulate


def simulate_panel(spec: ModelSpec, theta, T: int, n_subjects: int, seed: int, initial_q: float = 0.5) -> PanelData:
    names = [f"x{j + 1}" for j in range(spec.l)]
    subjects = []
    for i in range(n_subjects):
        rng = make_rng(seed, _SIMULATE_STREAM, i)
        y, x = simulate_series(theta, spec, T, rng, InitialPolicy.bernoulli(initial_q))
        subjects.append((str(i + 1), y, np.zeros((T, 0)) if x is None else x))
    return PanelData(names, subjects)


def cmd_simulate(args) -> int:
    theta = _floats(args.theta)
    l = len(theta) - args.p - 1
    if l < 0:
        raise InputError(f"theta needs at least p+1 = {args.p + 1} values (alpha..., beta0..beta{args.p})")
    spec = ModelSpec(p=args.p, l=l)
    data = simulate_panel(spec, theta, args.T, args.n_subjects, args.seed, args.initial_q)
    try:
        write_panel(args.out, data)
    except OSError as exc:
        raise InputError(f"cannot write {args.out}: {exc}") from None
    if args.manifest:
        cfg = {"command": "simulate", "p": args.p, "theta": theta, "T": args.T,
               "n_subjects": args.n_subjects, "seed": args.seed, "initial_q": args.initial_q}
        Path(args.manifest).write_text(dump_json(manifest("simulate", cfg, [str(args.out)])), encoding="utf-8")
    return EXIT_OK


# ---------------------------------------------------------------- reproduce


def cmd_reproduce(args) -> int:
    opts = StudyOptions(
        replicates=args.replicates,
        seed=args.seed,
        T=_ints(args.T) if args.T else None,
        ratios=("low", "high") if args.ratio == "both" else (args.ratio,),
        table3_high_alpha=args.table3_high_alpha,
        workers=args.workers,
        beta1_grid=_floats(args.beta1_grid) if args.beta1_grid else None,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = run_study(args.study, opts)
    csv_path = out_dir / f"{args.study}.csv"
    write_rows_csv(csv_path, rows)
    cfg = {"command": "reproduce", "study": args.study, **opts.to_dict()}
    man_path = out_dir / f"{args.study}.manifest.json"
    man_path.write_text(dump_json(manifest("reproduce", cfg, [csv_path.name])), encoding="utf-8", newline="\n")
    sys.stdout.write(f"wrote {csv_path} ({len(rows)} rows) and {man_path}\n")
    return EXIT_OK


# ---------------------------------------------------------------- oracle-check


def oracle_check(p_values, T_max: int, trials: int, seed: int, l: int = 0, T_min: int | None = None):
    """Compare every applicable exact-information algorithm on random configurations.

    Returns ``(max_discrepancy, worst_case, n_cases)``.
    """
    worst, worst_case, n_cases = 0.0, None, 0
    for p in p_values:
        spec = ModelSpec(p=p, l=l)
        lo = p + 1 if T_min is None else max(T_min, p + 1)
        if T_max - p > MAX_ENUMERATION:
            raise EnumerationSizeError(f"T - p = {T_max - p} exceeds the enumeration limit {MAX_ENUMERATION}")
        for T in range(lo, T_max + 1):
            for trial in range(trials):
                rng = make_rng(seed, p, T, trial)
                theta = rng.uniform(-2.0, 2.0, spec.d)
                s0 = int(rng.integers(0, 1 << p))
                x = rng.standard_normal((T, l)) if l else None
                ref = ex_fi_forward(theta, spec, s0, T, x)
                others = {
                    "bruteforce": ex_fi_bruteforce(theta, spec, s0, T, x),
                    "functional_iteration": ex_fi_functional_iteration(theta, spec, s0, T, x),
                }
                if p == 1 and l == 0:
                    others["lar1_closed_form"] = ex_fi_lar1_closed_form(theta, T, s0)
                n_cases += 1
                for name, m in others.items():
                    diff = float(np.max(np.abs(m - ref)))
                    if diff > worst or worst_case is None:
                        worst = max(worst, diff)
                        worst_case = {"p": p, "l": l, "T": T, "trial": trial, "theta": theta.tolist(),
                                      "initial_state": list(decode_state(s0, p)), "algorithm": name,
                                      "max_abs_diff": diff}
    return worst, worst_case, n_cases


def cmd_oracle_check(args) -> int:
    p_values = list(range(args.p_min, args.p_max + 1))
    worst, case, n = oracle_check(p_values, args.T_max, args.trials, args.seed, l=args.l)
    ok = worst < ORACLE_TOL
    sys.stdout.write(f"{n} configurations, max |difference| vs forward recursion = {worst:.3e} "
                     f"({'PASS' if ok else 'FAIL'} at {ORACLE_TOL:g})\n")
    if not ok:
        sys.stdout.write(json.dumps(case, indent=2) + "\n")
        return EXIT_VERIFY
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="larfisher", description="Exact Fisher information for logistic autoregressive binary time series")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    f = sub.add_parser("fit", help="fit a LAR/LARX model to a panel CSV")
    f.add_argument("data", help="panel CSV with header subject,t,y[,covariates]")
    f.add_argument("--p", type=int, default=1, help="lag order")
    f.add_argument("--covariates", help="comma-separated covariate columns (default: all)")
    f.add_argument("--threshold", action="append", metavar="COL>CUT", help="add indicator column 1[COL > CUT]")
    f.add_argument("--level", type=float, default=0.95)
    f.add_argument("--fi", choices=("exact", "empirical", "both"), default="both")
    f.add_argument("--functional", action="append", metavar="SPEC", help='e.g. "prob|lag=1|stress=0"')
    f.add_argument("--out", help="write the JSON result document here")
    f.add_argument("--dump-qt", help="write lag-state distributions at the MLE as CSV")
    f.add_argument("--max-iter", type=int, default=FitConfig.max_iter)
    f.add_argument("--grad-tol", type=float, default=FitConfig.grad_tol)
    f.add_argument("--seed", type=int, default=0, help="recorded in the metadata; fitting is deterministic")
    f.set_defaults(func=cmd_fit)

    s = sub.add_parser("simulate", help="simulate a panel CSV")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--theta", required=True, help="alpha_1..alpha_l,beta_0..beta_p comma-separated")
    s.add_argument("--T", type=int, required=True)
    s.add_argument("--n-subjects", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--initial-q", type=float, default=0.5, help="P(y=1) for the initial block")
    s.add_argument("--out", required=True)
    s.add_argument("--manifest", help="also write a JSON run manifest")
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("reproduce", help="rerun a published simulation study")
    r.add_argument("study", choices=STUDIES)
    r.add_argument("--replicates", type=int, help="override the published replicate count")
    r.add_argument("--T", help="comma-separated series lengths (grid points for figures)")
    r.add_argument("--ratio", choices=("low", "high", "both"), default="both")
    r.add_argument("--table3-high-alpha", type=float, default=0.5,
                   help="alpha_1 of the LARX(1) high-ratio scenario (text says 0.5, table header 1)")
    r.add_argument("--beta1-grid", help="comma-separated beta1 values for fig2")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--workers", type=int, help="worker processes (default $LARFISHER_WORKERS or 1)")
    r.add_argument("--out", default="results")
    r.set_defaults(func=cmd_reproduce)

    o = sub.add_parser("oracle-check", help="cross-check all exact-information algorithms")
    o.add_argument("--p-min", type=int, default=1)
    o.add_argument("--p-max", type=int, default=3)
    o.add_argument("--T-max", type=int, default=12)
    o.add_argument("--l", type=int, default=0, help="number of random exogenous covariates")
    o.add_argument("--trials", type=int, default=50)
    o.add_argument("--seed", type=int, default=0)
    o.set_defaults(func=cmd_oracle_check)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (InputError, PanelParseError, EnumerationSizeError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except NumericalError as exc:
        sys.stderr.write(f"numerical error: {exc}\n")
        return EXIT_SEPARATION


if __name__ == "__main__":
    sys.exit(main())
