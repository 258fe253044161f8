"""Command-line surface.

Subcommands
-----------
eval     evaluate pdf / survival / cdf / quantile / moment at given points
sample   draw observations to CSV (raw draw order, or sorted)
fit      method-of-moments fit of (theta, beta) from CSV or stdin
hill     Hill estimates with plug-in confidence intervals over a k-grid
dhill    weighted spacing statistic with condition diagnostics (JSON)
records  extract records from a CSV stream, or simulate the n-th record
verify   run one Monte Carlo experiment, or the whole battery (--all)

Exit codes: 0 success (verify: passed), 1 verify tolerance failure,
2 usage, 3 output I/O failure, 4 input parse failure, 5 mathematical
precondition refused (infeasible fit, degenerate spacings, condition-check
refusal).

Every flag can also come from the environment as ``PLEVT_<DEST>`` (dest in
upper case, e.g. ``PLEVT_SEED=42``, ``PLEVT_THETA=2.5``); an explicit flag
wins over the environment. Commands are deterministic given the full flag
set, seed included.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace

import numpy as np
from scipy.special import ndtri

from .distribution import Params, cdf, fit_method_of_moments, moment, pdf, survival
from .errors import (
    CsvFormatError,
    DegenerateSampleError,
    DomainError,
    ExperimentRefusedError,
    FitInfeasibleError,
    NotEvaluableError,
    ParameterError,
)
from .harness import (
    Experiment,
    default_thresholds,
    report_to_json,
    run_experiment,
    run_suite,
    standard_suite,
    suite_to_json,
    write_csv_summary,
)
from .quantile import quantile_values
from .records import extract_records, simulate_record, standardized_record
from .sampling import (
    SampleOrigin,
    SeedSpec,
    SortedSample,
    mixture_values,
    parse_values_lines,
    read_values_csv,
    sample_mixture,
    write_values_csv,
)
from .tail import (
    WeightFunction,
    check_dh_conditions,
    check_k1,
    default_k,
    dh_statistic,
    hill,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_OUTPUT_IO = 3
EXIT_PARSE = 4
EXIT_REFUSED = 5

_ENV_PREFIX = "PLEVT_"
DEFAULT_MASTER_SEED = 7


def _apply_env_defaults(parser: argparse.ArgumentParser) -> None:
    """Fill flag defaults from PLEVT_<DEST> environment variables."""
    for action in parser._actions:
        if not action.option_strings or action.dest in ("help", "version"):
            continue
        env_name = _ENV_PREFIX + action.dest.upper()
        raw = os.environ.get(env_name)
        if raw is None:
            continue
        try:
            if isinstance(action, argparse._StoreTrueAction):
                action.default = raw.strip().lower() in ("1", "true", "yes", "on")
            elif action.nargs in ("+", "*"):
                conv = action.type or str
                action.default = [conv(tok) for tok in raw.split(",")]
            else:
                conv = action.type or str
                action.default = conv(raw)
        except ValueError:
            parser.error(f"invalid value in {env_name}: {raw!r}")
        action.required = False


def _resolve_seed(args: argparse.Namespace) -> SeedSpec:
    seed = args.seed
    if seed is None:
        print(
            f"warning: no --seed given (and no PLEVT_SEED); "
            f"using default master seed {DEFAULT_MASTER_SEED}",
            file=sys.stderr,
        )
        seed = DEFAULT_MASTER_SEED
    return SeedSpec(seed, getattr(args, "stream", 0) or 0)


def _read_input_values(path: str | None) -> np.ndarray:
    if path in (None, "-"):
        return parse_values_lines(sys.stdin.read().split("\n"), label="<stdin>")
    try:
        return read_values_csv(path)
    except OSError as exc:
        raise CsvFormatError(path, 0, f"unreadable input: {exc}") from exc


def _write_text(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _ingested(values: np.ndarray, path: str | None) -> SortedSample:
    return SortedSample(
        np.sort(values), SampleOrigin("ingested", path=path or "<stdin>")
    )


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval(args: argparse.Namespace) -> int:
    p = Params(args.theta, args.beta)
    lines = []
    if args.fn in ("pdf", "survival", "cdf"):
        if not args.x:
            raise ParameterError(f"--fn {args.fn} requires --x")
        fn = {"pdf": pdf, "survival": survival, "cdf": cdf}[args.fn]
        xs = np.asarray(args.x, dtype=np.float64)
        for x, v in zip(xs, np.atleast_1d(fn(xs, p))):
            lines.append(f"{float(x)!r}\t{float(v)!r}")
    elif args.fn == "quantile":
        if not args.u:
            raise ParameterError("--fn quantile requires --u")
        us = np.asarray(args.u, dtype=np.float64)
        for u, v in zip(us, quantile_values(us, p)):
            lines.append(f"{float(u)!r}\t{float(v)!r}")
    else:  # moment
        if args.n is None:
            raise ParameterError("--fn moment requires --n (the moment order)")
        lines.append(f"{args.n}\t{moment(args.n, p)!r}")
    _write_text(args.output, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    if args.n is None:
        raise ParameterError("sample requires -n/--n (or PLEVT_N)")
    if args.n < 1:
        raise ParameterError(f"-n must be >= 1, got {args.n}")
    p = Params(args.theta, args.beta)
    seed = _resolve_seed(args)
    if args.sorted:
        values = sample_mixture(args.n, p, seed).values
    else:
        values = mixture_values(args.n, p, seed)
    if args.output in (None, "-"):
        write_values_csv(values, sys.stdout)
        return EXIT_OK
    with open(args.output, "w", encoding="utf-8") as fh:
        write_values_csv(values, fh)
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    values = _read_input_values(args.input)
    result = fit_method_of_moments(values)
    payload = {
        "theta": result.params.theta,
        "beta": result.params.beta,
        "gamma": result.params.gamma,
        "m1": result.m1,
        "m2": result.m2,
        "n_obs": int(values.size),
    }
    _write_text(args.output, json.dumps(payload, sort_keys=True) + "\n")
    return EXIT_OK


def _parse_k_grid(spec: str, n: int) -> list[int]:
    parts = spec.split(":")
    if len(parts) not in (2, 3) or not all(s.strip() for s in parts):
        raise ParameterError(
            f"--k-grid expects MIN:MAX[:STEP], got {spec!r}"
        )
    try:
        nums = [int(s) for s in parts]
    except ValueError:
        raise ParameterError(
            f"--k-grid expects integers MIN:MAX[:STEP], got {spec!r}"
        ) from None
    lo, hi = nums[0], nums[1]
    step = nums[2] if len(nums) == 3 else 1
    if step < 1 or lo > hi:
        raise ParameterError(f"empty or descending --k-grid {spec!r}")
    ks = list(range(lo, hi + 1, step))
    for k in ks:
        _validate_k(k, n)
    return ks


def _validate_k(k: int, n: int) -> None:
    if not 1 <= k <= n - 1:
        raise ParameterError(f"--k must satisfy 1 <= k <= n-1 = {n - 1}, got {k}")


def cmd_hill(args: argparse.Namespace) -> int:
    values = _read_input_values(args.input)
    n = int(values.size)
    if n < 3:
        raise ParameterError(f"hill needs at least 3 observations, got {n}")
    sample = _ingested(values, args.input)
    if args.k is not None and args.k_grid is not None:
        raise ParameterError("--k and --k-grid are mutually exclusive")
    if args.k_grid is not None:
        ks = _parse_k_grid(args.k_grid, n)
    elif args.k is not None:
        _validate_k(args.k, n)
        ks = [args.k]
    else:
        ks = [default_k(n)]
    if not 0.0 < args.level < 1.0:
        raise ParameterError(f"--level must lie in (0, 1), got {args.level}")
    z = float(ndtri(0.5 + args.level / 2.0))
    rows = ["k,hill,ci_low,ci_high"]
    for k in ks:
        h = hill(sample, k)
        half = z * h / math.sqrt(k)
        rows.append(f"{k},{h!r},{h - half!r},{h + half!r}")
    _write_text(args.output, "\n".join(rows) + "\n")
    return EXIT_OK


def cmd_dhill(args: argparse.Namespace) -> int:
    values = _read_input_values(args.input)
    n = int(values.size)
    if n < 3:
        raise ParameterError(f"dhill needs at least 3 observations, got {n}")
    sample = _ingested(values, args.input)
    weight = WeightFunction.from_spec(args.f)
    k = args.k if args.k is not None else default_k(n)
    _validate_k(k, n)
    ts = dh_statistic(sample, weight, k, args.s)
    conditions = dict(check_dh_conditions(weight, n, k, args.s))
    conditions["k1"] = check_k1(n, k)
    payload = {
        "n": n,
        "k": ts.k,
        "s": ts.s,
        "weight": weight.label,
        "hill": ts.hill,
        "t_n": ts.t_n,
        "a_n": ts.a_n,
        "s_n": ts.s_n,
        "b_n": ts.b_n,
        "dh_estimate": ts.dh_estimate,
        "conditions": conditions,
    }
    _write_text(args.output, json.dumps(payload, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_records(args: argparse.Namespace) -> int:
    if args.simulate:
        if args.n is None:
            raise ParameterError("records --simulate requires --n (record index)")
        if args.n < 1:
            raise ParameterError(f"--n must be >= 1, got {args.n}")
        p = Params(args.theta, args.beta)
        seed = _resolve_seed(args)
        value = simulate_record(args.n, p, seed)
        payload = {
            "n": args.n,
            "value": value,
            "standardized": standardized_record(value, args.n, p),
        }
        _write_text(args.output, json.dumps(payload, sort_keys=True) + "\n")
        return EXIT_OK
    values = _read_input_values(args.input)
    rec = extract_records(values)
    rows = ["index,value"]
    for idx, val in zip(rec.indices, rec.values):
        rows.append(f"{int(idx)},{float(val)!r}")
    _write_text(args.output, "\n".join(rows) + "\n")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    p = Params(args.theta, args.beta)
    seed = _resolve_seed(args)
    overrides = {}
    if args.ks is not None:
        overrides["ks"] = args.ks
    if args.mean_window is not None:
        overrides["mean_window"] = args.mean_window
    if args.var_window is not None:
        overrides["var_window"] = args.var_window

    if args.all:
        if args.kind is not None:
            raise ParameterError("--all and --kind are mutually exclusive")
        if overrides:
            raise ParameterError("threshold overrides apply to single --kind runs only")
        results = run_suite(standard_suite(p, seed), workers=args.workers)
        _write_text(args.output, suite_to_json(results, stable=args.stable_json) + "\n")
        if args.csv is not None:
            with open(args.csv, "w", encoding="utf-8") as fh:
                write_csv_summary(results, fh)
        return EXIT_OK if all(r.passed for _, r in results) else EXIT_VERIFY_FAILED

    if args.kind is None:
        raise ParameterError("verify requires --kind (or --all)")
    thresholds = (
        replace(default_thresholds(args.kind), **overrides) if overrides else None
    )
    experiment = Experiment(
        kind=args.kind,
        params=p,
        n=args.n,
        k=args.k,
        weight=WeightFunction.from_spec(args.f) if args.f is not None else None,
        s=args.s,
        reps=args.reps,
        seed=seed,
        thresholds=thresholds,
        rerun_on_fail=not args.no_rerun,
    )
    report = run_experiment(experiment, workers=args.workers)
    _write_text(args.output, report_to_json(report, stable=args.stable_json) + "\n")
    if args.csv is not None:
        with open(args.csv, "w", encoding="utf-8") as fh:
            write_csv_summary([(experiment, report)], fh)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------
# parser


def _add_params(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--theta", type=float, default=1.0, help="rate parameter theta > 0")
    sub.add_argument("--beta", type=float, default=2.0, help="shape parameter beta > 1")


def _add_seed(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=None, help="64-bit master seed")
    sub.add_argument("--stream", type=int, default=0, help="base stream id (default 0)")


def _add_output(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("-o", "--output", default=None, help="output path (default stdout)")


def _add_input(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("-i", "--input", default=None, help="input CSV path (default stdin)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plevt",
        description="Pseudo-Lindley distribution toolkit: evaluation, sampling, "
        "tail estimation, records, and Monte Carlo verification.",
    )
    try:
        from importlib.metadata import version

        pkg_version = version("plevt")
    except Exception:  # pragma: no cover - not installed
        pkg_version = "unknown"
    parser.add_argument("--version", action="version", version=f"plevt {pkg_version}")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("eval", help="evaluate distribution functions")
    sub.add_argument(
        "--fn",
        required=True,
        choices=("pdf", "survival", "cdf", "quantile", "moment"),
        help="function to evaluate",
    )
    _add_params(sub)
    sub.add_argument("--x", type=float, nargs="+", help="evaluation points (pdf/survival/cdf)")
    sub.add_argument("--u", type=float, nargs="+", help="tail masses in (0,1) (quantile)")
    sub.add_argument("--n", type=int, default=None, help="moment order (moment)")
    _add_output(sub)
    sub.set_defaults(func=cmd_eval)

    sub = subs.add_parser("sample", help="draw observations to CSV")
    sub.add_argument("-n", "--n", dest="n", type=int, default=None, help="sample size")
    _add_params(sub)
    _add_seed(sub)
    sub.add_argument("--sorted", action="store_true", help="emit sorted ascending")
    _add_output(sub)
    sub.set_defaults(func=cmd_sample)

    sub = subs.add_parser("fit", help="method-of-moments fit from CSV/stdin")
    _add_input(sub)
    _add_output(sub)
    sub.set_defaults(func=cmd_fit)

    sub = subs.add_parser("hill", help="Hill estimates with confidence intervals")
    _add_input(sub)
    sub.add_argument("--k", type=int, default=None, help="number of top spacings")
    sub.add_argument("--k-grid", default=None, help="k grid MIN:MAX[:STEP]")
    sub.add_argument("--level", type=float, default=0.95, help="confidence level")
    _add_output(sub)
    sub.set_defaults(func=cmd_hill)

    sub = subs.add_parser("dhill", help="weighted spacing statistic (JSON)")
    _add_input(sub)
    sub.add_argument("--k", type=int, default=None, help="number of top spacings")
    sub.add_argument("--f", default="identity", help="weight spec: identity | pow:<a> | log1p | table:<path>")
    sub.add_argument("--s", type=float, default=1.0, help="spacing power s >= 1")
    _add_output(sub)
    sub.set_defaults(func=cmd_dhill)

    sub = subs.add_parser("records", help="extract records from CSV, or simulate one")
    _add_input(sub)
    sub.add_argument("--simulate", action="store_true", help="simulate the n-th record instead")
    sub.add_argument("--n", type=int, default=None, help="record index (with --simulate)")
    _add_params(sub)
    _add_seed(sub)
    _add_output(sub)
    sub.set_defaults(func=cmd_records)

    sub = subs.add_parser("verify", help="run Monte Carlo verification experiments")
    sub.add_argument("--kind", default=None, help="experiment kind")
    sub.add_argument("--all", action="store_true", help="run the whole battery")
    _add_params(sub)
    sub.add_argument("--n", type=int, default=None, help="sample size / record index")
    sub.add_argument("--k", type=int, default=None, help="top-spacings count")
    sub.add_argument("--f", default=None, help="weight spec (dh_clt)")
    sub.add_argument("--s", type=float, default=None, help="spacing power (dh_clt)")
    sub.add_argument("--reps", type=int, default=None, help="replications")
    _add_seed(sub)
    sub.add_argument("--workers", type=int, default=1, help="thread workers for replications")
    sub.add_argument("--ks", type=float, default=None, help="override KS threshold")
    sub.add_argument("--mean-window", type=float, default=None, help="override mean window")
    sub.add_argument("--var-window", type=float, default=None, help="override variance window")
    sub.add_argument("--no-rerun", action="store_true", help="disable the automatic re-run")
    sub.add_argument(
        "--stable-json",
        action="store_true",
        help="zero the runtime_ms field for byte-identical comparisons",
    )
    sub.add_argument("--csv", default=None, help="also write a CSV summary to this path")
    _add_output(sub)
    sub.set_defaults(func=cmd_verify)

    for sub_parser in subs.choices.values():
        _apply_env_defaults(sub_parser)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, DomainError, NotEvaluableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CsvFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ExperimentRefusedError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        print(json.dumps(exc.diagnostics, sort_keys=True), file=sys.stderr)
        return EXIT_REFUSED
    except (FitInfeasibleError, DegenerateSampleError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OUTPUT_IO


if __name__ == "__main__":
    sys.exit(main())
