"""Command-line front end for sweeps, comparisons, and self-checks.

Every option can also come from a flat key=value config file passed with
--config; values given on the command line win over the file, which wins
over the built-in defaults.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .experiments import (
    SweepConfig,
    default_m_values,
    emit_outputs,
    run_conventional_comparison,
    run_sweep,
)
from .model import SCHEDULE_KINDS

_DEFAULTS = {
    "a": (1.0 / 6.0,),
    "schedule": "eis",
    "max_m": None,
    "shots": 100,
    "reps": 1000,
    "seed": 0,
    "percentile": 81.0,
    "nq_min": 1e3,
    "nq_max": 1e5,
    "out": "results",
    "format": "csv+svg",
    "workers": 1,
    "n": 2,
    "bmax": math.pi / 4.0,
}


def load_config_file(path) -> dict:
    """Flat key = value pairs; '#' starts a comment, keys use underscores."""
    values: dict = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line is not key = value: {raw!r}")
        key, _, text = line.partition("=")
        key = key.strip().replace("-", "_")
        text = text.strip()
        if key == "a":
            values[key] = tuple(float(tok) for tok in text.replace(",", " ").split())
        elif key in ("schedule", "out", "format"):
            values[key] = text
        elif key in ("max_m", "shots", "reps", "seed", "workers", "n"):
            values[key] = int(text)
        elif key in ("percentile", "nq_min", "nq_max", "bmax"):
            values[key] = float(text)
        else:
            raise ValueError(f"unknown config key {key!r}")
    return values


def _resolve(args: argparse.Namespace, keys) -> dict:
    file_values = load_config_file(args.config) if getattr(args, "config", None) else {}
    resolved = {}
    for key in keys:
        cli_value = getattr(args, key, None)
        if cli_value is not None:
            resolved[key] = cli_value
        elif key in file_values:
            resolved[key] = file_values[key]
        else:
            resolved[key] = _DEFAULTS[key]
    if "a" in resolved:
        resolved["a"] = tuple(resolved["a"])
    return resolved


def m_values_for(kind: str, max_m, n_shot: int, nq_min: float, nq_max: float) -> tuple[int, ...]:
    """Depth list for a sweep; an explicit --max-m caps the usual spread."""
    if max_m is None:
        return default_m_values(kind, n_shot, nq_min, nq_max)
    if max_m < 0:
        raise ValueError("--max-m must be >= 0")
    if kind == "eis":
        return tuple(range(max_m + 1))
    import numpy as np

    if kind == "lis":
        vals = np.unique(np.round(np.geomspace(2, max(max_m, 3), 12)).astype(int))
        return tuple(int(v) for v in vals if v <= max_m) or (max_m,)
    if kind == "classical":
        lo = max(1, math.ceil(nq_min / n_shot) - 1)
        vals = np.unique(np.round(np.geomspace(lo, max(max_m, lo + 1), 10)).astype(int))
        return tuple(int(v) for v in vals if v <= max_m) or (max_m,)
    raise ValueError(f"no depth list for schedule kind {kind!r}")


def _add_common(parser: argparse.ArgumentParser, with_schedule: bool = True):
    parser.add_argument("--config", help="flat key = value file with defaults for the flags")
    parser.add_argument(
        "--a", action="append", type=float, help="target probability, repeatable"
    )
    if with_schedule:
        parser.add_argument("--schedule", choices=[k for k in SCHEDULE_KINDS if k != "custom"])
        parser.add_argument("--max-m", dest="max_m", type=int, help="largest depth setting M")
    parser.add_argument("--shots", type=int, help="shots per schedule entry")
    parser.add_argument("--reps", type=int, help="independent repetitions per point")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--percentile", type=float, help="percentile of |error| to report")
    parser.add_argument("--nq-min", dest="nq_min", type=float, help="fit window lower edge")
    parser.add_argument("--nq-max", dest="nq_max", type=float, help="fit window upper edge")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--format", choices=["csv", "csv+svg"], help="what to write")
    parser.add_argument("--workers", type=int, help="processes for the repetitions")


def _sweep_config(opts: dict, kind: str, m_values) -> SweepConfig:
    return SweepConfig(
        a_targets=opts["a"],
        schedule_kind=kind,
        m_values=tuple(m_values),
        n_shot=opts["shots"],
        repetitions=opts["reps"],
        seed=opts["seed"],
        percentile=opts["percentile"],
        nq_min=opts["nq_min"],
        nq_max=opts["nq_max"],
        out_dir=Path(opts["out"]),
        workers=opts["workers"],
    )


def _print_fits(curve) -> None:
    seen = set()
    for row in curve.rows:
        key = (row.kind, row.a_target)
        if key in seen or math.isnan(row.gamma_fit):
            continue
        seen.add(key)
        print(
            f"{row.kind:>12s}  a={row.a_target:.6g}  "
            f"gamma={row.gamma_fit:+.4f}  delta={row.delta_fit:+.4f}"
        )


def cmd_sweep(args) -> int:
    opts = _resolve(args, ("a", "schedule", "max_m", "shots", "reps", "seed", "percentile",
                           "nq_min", "nq_max", "out", "format", "workers"))
    kind = opts["schedule"]
    m_values = m_values_for(kind, opts["max_m"], opts["shots"], opts["nq_min"], opts["nq_max"])
    config = _sweep_config(opts, kind, m_values)
    curve = run_sweep(config)
    written = emit_outputs(curve, config.out_dir, stem="sweep", fmt=opts["format"])
    _print_fits(curve)
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_compare_conventional(args) -> int:
    opts = _resolve(args, ("a", "shots", "reps", "seed", "percentile",
                           "nq_min", "nq_max", "out", "format", "workers"))
    config = _sweep_config(opts, "eis", ())
    curve = run_conventional_comparison(config)
    written = emit_outputs(curve, config.out_dir, stem="comparison", fmt=opts["format"])
    _print_fits(curve)
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_mc_integrate(args) -> int:
    from .mle import MLConfig
    from .montecarlo import IntegralProblem, estimate_integral, exact_sum, integral_closed_form
    from .model import make_schedule

    opts = _resolve(args, ("n", "bmax", "schedule", "max_m", "shots", "seed", "out", "format"))
    problem = IntegralProblem(opts["n"], opts["bmax"])
    max_m = opts["max_m"] if opts["max_m"] is not None else 8
    schedule = make_schedule(opts["schedule"], max_m, opts["shots"])
    s_hat, report = estimate_integral(problem, schedule, MLConfig(), opts["seed"])
    exact = exact_sum(problem)
    print(f"estimate        {s_hat:.12g}")
    print(f"discretised sum {exact:.12g}")
    print(f"continuum value {integral_closed_form(problem.b_max):.12g}")
    print(f"error           {abs(s_hat - exact):.6g}")
    print(f"crb             {report.crb_error:.6g}")
    print(f"queries         {report.n_queries}")
    if opts["out"]:
        out_dir = Path(opts["out"])
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / "mc_integrate.csv"
        header = "n,b_max,kind,M,n_shot,seed,s_hat,exact_sum,crb,classical_bound,n_queries"
        row = ",".join(
            (
                str(problem.n),
                format(problem.b_max, ".12g"),
                schedule.kind,
                str(max_m),
                str(opts["shots"]),
                str(opts["seed"]),
                format(s_hat, ".12g"),
                format(exact, ".12g"),
                format(report.crb_error, ".12g"),
                format(report.classical_bound, ".12g"),
                str(report.n_queries),
            )
        )
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(header + "\n" + row + "\n")
        print(f"wrote {path}")
    return 0


def cmd_bounds(args) -> int:
    from .model import make_schedule
    from .stats import bound_report

    opts = _resolve(args, ("a", "schedule", "max_m", "shots"))
    max_m = opts["max_m"] if opts["max_m"] is not None else 5
    schedule = make_schedule(opts["schedule"], max_m, opts["shots"])
    for a in opts["a"]:
        report = bound_report(schedule, a)
        print(
            f"a={a:.6g}  fisher={report.fisher:.6g}  queries={report.n_queries}  "
            f"crb={report.crb_error:.6g}  classical={report.classical_bound:.6g}"
        )
    return 0


def cmd_selftest(args) -> int:
    from . import selfcheck

    return selfcheck.run()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mlqae",
        description="Amplitude estimation by likelihood combination over amplification depths.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="error curve of one schedule kind")
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare-conventional", help="percentile comparison against register readout")
    _add_common(p, with_schedule=False)
    p.set_defaults(func=cmd_compare_conventional)

    p = sub.add_parser("mc-integrate", help="simulated estimation of the discretised sine integral")
    p.add_argument("--config", help="flat key = value file with defaults for the flags")
    p.add_argument("--n", type=int, help="domain qubits")
    p.add_argument("--bmax", type=float, help="upper integration limit")
    p.add_argument("--schedule", choices=[k for k in SCHEDULE_KINDS if k != "custom"])
    p.add_argument("--max-m", dest="max_m", type=int, help="largest depth setting M")
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output directory (optional)")
    p.add_argument("--format", choices=["csv", "csv+svg"])
    p.set_defaults(func=cmd_mc_integrate)

    p = sub.add_parser("bounds", help="print theory bounds for a schedule")
    p.add_argument("--config", help="flat key = value file with defaults for the flags")
    p.add_argument("--a", action="append", type=float)
    p.add_argument("--schedule", choices=[k for k in SCHEDULE_KINDS if k != "custom"])
    p.add_argument("--max-m", dest="max_m", type=int)
    p.add_argument("--shots", type=int)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("selftest", help="run the oracle-equivalence checks")
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
