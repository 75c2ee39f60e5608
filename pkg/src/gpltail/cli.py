"""Batch command-line front end.

Every subcommand takes a census CSV (``unit,workers``) or a directory of
monthly CSVs.  In directory mode each ``*.csv`` file is processed on its own
and the reports are collected into one time-series document keyed by the
YYYY-MM tag in the file name.

Exit codes: 0 success, 1 invalid input, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._errors import DegenerateSampleError, GPLError, ParameterError, ValidationError
from .census import COMPARISON_FAMILIES, compare_models, load_census_csv, month_tag, rank_size_series
from .distributions import pareto1, sample as draw
from .estimation import CensoredSample, fit_mle, make_model
from .gof import bootstrap_gof
from .rng import RandomSource
from .summary_stats import summarize
from .tail_analysis import find_tail_lower_bound

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2
_DEFAULT_REPLICATES = {"tail": 1000, "ranksize": 1000, "gof": 100}
_STATS_COLUMNS = ("month", "sample_size", "censored_count", "maximum", "median", "half_iqr",
                  "quartile_dev_coeff", "bowley_skew", "moors_kurtosis")


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, (ValidationError, ParameterError, DegenerateSampleError, OSError)):
        return EXIT_INVALID
    return EXIT_NUMERICAL


def _clean(obj):
    """JSON-safe copy: NaN and infinities become null, numpy scalars become Python numbers."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    tmp = f"{out}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, out)


def _inputs(path: Path):
    """(month tag, file) pairs: the file itself, or every CSV in a directory."""
    if path.is_dir():
        files = sorted(path.glob("*.csv"))
        if not files:
            raise ValidationError(f"no .csv files in {path}")
        return [(month_tag(f) or f.stem, f) for f in files], True
    if not path.exists():
        raise ValidationError(f"no such file: {path}")
    return [(month_tag(path) or path.stem, path)], False


def _load(args, path) -> CensoredSample:
    return load_census_csv(path, args.censor_marker, args.censor_threshold)


def _model(args):
    return make_model(args.family, args.g_kind)


# -- per-file commands; each returns a JSON-ready dict ----------------------

def _cmd_stats(args, data, src):
    return summarize(data, strict=False).to_dict()


def _cmd_tail(args, data, src):
    return find_tail_lower_bound(data, args.significance, args.replicates, src).to_dict()


def _cmd_fit(args, data, src):
    return fit_mle(_model(args), data).to_dict()


def _cmd_compare(args, data, src):
    families = args.family_list or list(COMPARISON_FAMILIES)
    return compare_models(data, families).to_dict()


def _cmd_gof(args, data, src):
    return bootstrap_gof(data, _model(args), args.replicates, src, statistic=args.statistic).to_dict()


def _cmd_ranksize(args, data, src):
    if args.source == "tail":
        rep = find_tail_lower_bound(data, args.significance, args.replicates, src)
        tail = data.observed[data.observed >= rep.x_min]
        series = rank_size_series(tail, pareto1(rep.x_min, rep.alpha_hat))
        spec = pareto1(rep.x_min, rep.alpha_hat)
    else:
        res = fit_mle(_model(args), data, compute_se=False)
        if not res.converged:
            raise GPLError(f"fit did not converge: {res.message}")
        spec = res.spec
        series = rank_size_series(data, spec)
    return {"spec": spec.to_dict(), "csv": series.to_csv()}


_PER_FILE = {
    "stats": _cmd_stats,
    "tail": _cmd_tail,
    "fit": _cmd_fit,
    "compare": _cmd_compare,
    "gof": _cmd_gof,
    "ranksize": _cmd_ranksize,
}


def _stats_csv(months) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_STATS_COLUMNS)
    for m in months:
        rep = m.get("report")
        if rep is None:
            continue
        w.writerow([m["month"]] + ["" if rep[c] is None else repr(rep[c]) for c in _STATS_COLUMNS[1:]])
    return buf.getvalue()


def _run_files(args) -> int:
    entries, directory = _inputs(Path(args.path))
    if directory and args.command == "ranksize":
        raise ValidationError("ranksize takes a single file")
    base = RandomSource(args.seed)
    fn = _PER_FILE[args.command]
    months, worst = [], EXIT_OK
    for i, (tag, f) in enumerate(entries):
        # months draw from independent streams so they can be processed in any order
        src = base.child(i) if directory else base
        try:
            report = fn(args, _load(args, f), src)
            months.append({"month": tag, "file": f.name, "report": report})
        except GPLError as exc:
            if not directory:
                raise
            code = _exit_code(exc)
            worst = max(worst, code)
            months.append({"month": tag, "file": f.name, "error": str(exc), "exit_code": code})

    if args.command == "ranksize":
        _emit(months[0]["report"]["csv"], args.out)
        return EXIT_OK
    if args.command == "stats" and (args.format == "csv" or (args.out or "").endswith(".csv")):
        _emit(_stats_csv(months), args.out)
        return worst
    if directory:
        doc = {"schema_version": SCHEMA_VERSION, "command": args.command, "seed": args.seed,
               "months": months}
    else:
        doc = {"schema_version": SCHEMA_VERSION, "command": args.command, "seed": args.seed,
               "month": months[0]["month"], "file": months[0]["file"], "report": months[0]["report"]}
    _emit(dumps(doc), args.out)
    return worst


def _parse_params(items) -> dict:
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise ValidationError(f"--param expects name=value, got {item!r}")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise ValidationError(f"--param {name}: {value!r} is not a number") from None
    return out


def _simulated_csv(values, threshold, marker) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["unit", "workers"])
    for i, v in enumerate(values):
        k = int(math.ceil(v))  # integer headcounts; ceil keeps every unit at >= 1
        w.writerow([f"u{i:06d}", marker if k <= threshold else k])
    return buf.getvalue()


def _run_simulate(args) -> int:
    model = _model(args)
    params = {"alpha": 1.0, "beta": 0.5, "sigma": 100.0} if model.name == "gpl2" else {}
    params.update(_parse_params(args.param))
    missing = [n for n in model.param_names if n not in params]
    if missing:
        raise ValidationError(f"missing --param values for {', '.join(missing)}")
    spec = model.build({n: params[n] for n in model.param_names})
    base = RandomSource(args.seed)
    if args.months <= 1:
        _emit(_simulated_csv(draw(spec, args.n, base), args.censor_threshold, args.censor_marker),
              args.out)
        return EXIT_OK
    if args.out is None:
        raise ValidationError("--months needs --out DIRECTORY")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    year, month = map(int, args.start.split("-"))
    for i in range(args.months):
        y, m = year + (month - 1 + i) // 12, (month - 1 + i) % 12 + 1
        text = _simulated_csv(draw(spec, args.n, base.child(i)), args.censor_threshold,
                              args.censor_marker)
        _emit(text, str(out / f"{y:04d}-{m:02d}.csv"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gpltail", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--censor-marker", default="<5")
    common.add_argument("--censor-threshold", type=float, default=4.0)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--family", default="gpl2")
    fam.add_argument("--g-kind", default=None)
    boot = argparse.ArgumentParser(add_help=False)
    boot.add_argument("--replicates", type=int, default=None,
                      help="bootstrap replicates (default: 1000 for tail, 100 for gof)")
    boot.add_argument("--significance", type=float, default=0.1)

    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("stats", parents=[common], help="quantile summary (series in directory mode)")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_parser("tail", parents=[common, boot], help="power-law tail lower bound")
    sub.add_parser("fit", parents=[common, fam], help="censored maximum-likelihood fit")
    s = sub.add_parser("compare", parents=[common], help="BIC comparison against GPL(II)")
    s.add_argument("--family", dest="family_list", action="append", default=None,
                   help="repeatable; default: gpl2 and all comparison families")
    s = sub.add_parser("gof", parents=[common, fam, boot], help="bootstrap goodness-of-fit p-value")
    s.add_argument("--statistic", choices=("AD", "KS"), default="AD")
    s = sub.add_parser("ranksize", parents=[common, fam, boot], help="rank-size plot series (CSV)")
    s.add_argument("--source", choices=("fit", "tail"), default="fit")
    for name, parser in sub.choices.items():
        parser.add_argument("path", help="census CSV file or directory of monthly files")

    s = sub.add_parser("simulate", parents=[common, fam], help="write synthetic census CSVs")
    s.add_argument("--param", action="append", metavar="NAME=VALUE")
    s.add_argument("--n", type=int, default=8000)
    s.add_argument("--months", type=int, default=1)
    s.add_argument("--start", default="2017-01", help="first month tag in directory mode")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "replicates", 0) is None:
        # a gof replicate refits the full model, a tail replicate is a closed-form Hill fit
        args.replicates = _DEFAULT_REPLICATES[args.command]
    try:
        if args.command == "simulate":
            return _run_simulate(args)
        return _run_files(args)
    except (GPLError, OSError) as exc:
        code = _exit_code(exc)
        kind = "invalid input" if code == EXIT_INVALID else "numerical failure"
        print(f"gpltail {args.command}: {kind}: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
