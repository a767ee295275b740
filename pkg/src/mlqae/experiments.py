"""Repeated-estimation sweeps, error curves, and their CSV/SVG outputs.

A sweep fixes a schedule kind and a list of target probabilities, runs many
independent estimation repetitions per depth setting, and aggregates the
errors into one row per (kind, target, M).  Rows carry the theory bounds
and, per (kind, target) series, the fitted power-law exponent of the error
against the query count.  The CSV is the source of truth and is written
with fixed formatting so reruns are byte-identical; the SVG charts are a
convenience rendering of the same rows.
"""

from __future__ import annotations

import concurrent.futures
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .conventional import conventional_curve
from .mle import MLConfig, ml_estimate
from .model import Amplitude, make_schedule, sample_counts, trial_seed
from .stats import classical_error_bound, cramer_rao_error, fit_error_exponent

CSV_HEADER = "kind,a_target,M,n_queries,rmse,bias,percentile_error,crb,classical_bound,gamma_fit,delta_fit"

_SERIES_ORDER = ("classical", "lis", "eis", "conventional")


@dataclass(frozen=True)
class SweepConfig:
    a_targets: tuple[float, ...]
    schedule_kind: str = "eis"
    m_values: tuple[int, ...] = ()
    n_shot: int = 100
    repetitions: int = 1000
    seed: int = 0
    percentile: float = 81.0
    nq_min: float = 1e3
    nq_max: float = 1e5
    out_dir: Path | None = None
    workers: int = 1
    ml: MLConfig = field(default_factory=MLConfig)

    def __post_init__(self):
        object.__setattr__(self, "a_targets", tuple(float(a) for a in self.a_targets))
        object.__setattr__(self, "m_values", tuple(int(m) for m in self.m_values))
        if not self.a_targets:
            raise ValueError("at least one target probability is required")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if not 0.0 < self.percentile <= 100.0:
            raise ValueError("percentile must lie in (0, 100]")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class CurveRow:
    kind: str
    a_target: float
    M: int
    n_queries: int
    rmse: float
    bias: float
    percentile_error: float
    crb: float
    classical_bound: float
    gamma_fit: float
    delta_fit: float


@dataclass
class ErrorCurve:
    rows: list[CurveRow]

    def series(self, kind: str, a_target: float) -> list[CurveRow]:
        return [r for r in self.rows if r.kind == kind and r.a_target == a_target]

    def kinds(self) -> list[str]:
        seen = []
        for r in self.rows:
            if r.kind not in seen:
                seen.append(r.kind)
        return seen

    def a_targets(self) -> list[float]:
        seen = []
        for r in self.rows:
            if r.a_target not in seen:
                seen.append(r.a_target)
        return seen


def nearest_rank(values, pct: float) -> float:
    """Nearest-rank percentile: the ceil(pct/100 * len)-th order statistic."""
    ordered = np.sort(np.asarray(values, dtype=float))
    if ordered.size == 0:
        raise ValueError("percentile of an empty sample")
    rank = max(1, math.ceil(pct / 100.0 * ordered.size))
    return float(ordered[rank - 1])


def default_m_values(kind: str, n_shot: int, nq_min: float, nq_max: float) -> tuple[int, ...]:
    """Depth settings whose query counts span the fit window."""
    if kind == "eis":
        ms = []
        M = 0
        while True:
            ms.append(M)
            if n_shot * (2 ** (M + 1) + M - 1) >= nq_max or M >= 25:
                break
            M += 1
        return tuple(ms)
    if kind == "lis":
        top = 1
        while n_shot * (top + 1) ** 2 < nq_max and top < 200:
            top += 1
        vals = np.unique(np.round(np.geomspace(2, max(top, 3), 12)).astype(int))
        return tuple(int(v) for v in vals)
    if kind == "classical":
        lo = max(1, math.ceil(nq_min / n_shot) - 1)
        hi = max(lo + 1, math.ceil(nq_max / n_shot) - 1)
        vals = np.unique(np.round(np.geomspace(lo, hi, 10)).astype(int))
        return tuple(int(v) for v in vals)
    raise ValueError(f"no default depth list for schedule kind {kind!r}")


def _estimate_block(kind, M, n_shot, a, seed, rep_lo, rep_hi, ml_config) -> list[float]:
    """Estimates for repetitions [rep_lo, rep_hi); a top-level function so
    process pools can ship it to workers."""
    schedule = make_schedule(kind, M, n_shot)
    amplitude = Amplitude.from_probability(a)
    out = []
    for rep in range(rep_lo, rep_hi):
        data = sample_counts(schedule, amplitude, trial_seed(seed, kind, a, M, rep))
        out.append(ml_estimate(data, schedule, ml_config).a_hat)
    return out


def _estimates(config: SweepConfig, kind: str, M: int, a: float) -> np.ndarray:
    reps = config.repetitions
    if config.workers == 1:
        vals = _estimate_block(kind, M, config.n_shot, a, config.seed, 0, reps, config.ml)
        return np.asarray(vals)
    bounds = np.linspace(0, reps, config.workers + 1).astype(int)
    jobs = []
    with concurrent.futures.ProcessPoolExecutor(max_workers=config.workers) as pool:
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            if hi > lo:
                jobs.append(
                    pool.submit(
                        _estimate_block, kind, M, config.n_shot, a, config.seed, int(lo), int(hi), config.ml
                    )
                )
        vals: list[float] = []
        for job in jobs:  # submission order == repetition order
            vals.extend(job.result())
    return np.asarray(vals)


def _aggregate_rows(config: SweepConfig, kind: str, a: float, m_values) -> list[CurveRow]:
    rows = []
    for M in m_values:
        schedule = make_schedule(kind, M, config.n_shot)
        estimates = _estimates(config, kind, M, a)
        errors = estimates - a
        rows.append(
            CurveRow(
                kind=kind,
                a_target=a,
                M=M,
                n_queries=schedule.total_queries,
                rmse=float(np.sqrt(np.mean(errors**2))),
                bias=float(np.mean(errors)),
                percentile_error=nearest_rank(np.abs(errors), config.percentile),
                crb=cramer_rao_error(schedule, a),
                classical_bound=classical_error_bound(a, schedule.total_queries),
                gamma_fit=math.nan,
                delta_fit=math.nan,
            )
        )
    return rows


def _attach_fit(rows: list[CurveRow], nq_min: float, nq_max: float, metric: str) -> list[CurveRow]:
    """Fit the power law on one series and stamp it onto every row."""
    points = [(r.n_queries, getattr(r, metric)) for r in rows]
    try:
        fit = fit_error_exponent(points, (nq_min, nq_max))
    except ValueError:
        return rows
    return [replace(r, gamma_fit=fit.gamma, delta_fit=fit.delta) for r in rows]


def run_sweep(config: SweepConfig) -> ErrorCurve:
    """Error curve of one schedule kind over every target probability."""
    kind = config.schedule_kind
    m_values = config.m_values or default_m_values(kind, config.n_shot, config.nq_min, config.nq_max)
    rows: list[CurveRow] = []
    for a in config.a_targets:
        series = _aggregate_rows(config, kind, a, m_values)
        rows.extend(_attach_fit(series, config.nq_min, config.nq_max, "rmse"))
    return ErrorCurve(rows)


def run_conventional_comparison(config: SweepConfig) -> ErrorCurve:
    """Percentile-error comparison: deterministic readout vs sampling.

    Four series per target: the deterministic register-readout curve, the
    doubling schedule at the configured and at 30 shots per depth, and
    classical sampling.  Fits are taken on the percentile column, which is
    the quantity all four series share.
    """
    rows: list[CurveRow] = []
    for a in config.a_targets:
        conv = conventional_curve(a, range(3, 19))
        conv_rows = [
            CurveRow(
                kind="conventional",
                a_target=a,
                M=pt.m,
                n_queries=pt.n_queries,
                rmse=pt.worst_error,
                bias=0.0,
                percentile_error=pt.worst_error,
                crb=math.nan,
                classical_bound=classical_error_bound(a, pt.n_queries),
                gamma_fit=math.nan,
                delta_fit=math.nan,
            )
            for pt in conv
        ]
        rows.extend(_attach_fit(conv_rows, config.nq_min, config.nq_max, "percentile_error"))
        for kind, n_shot in (("eis", config.n_shot), ("eis", 30), ("classical", config.n_shot)):
            shot_config = replace(config, n_shot=n_shot, m_values=())
            m_values = default_m_values(kind, n_shot, config.nq_min, config.nq_max)
            series = _aggregate_rows(shot_config, kind, a, m_values)
            rows.extend(_attach_fit(series, config.nq_min, config.nq_max, "percentile_error"))
    return ErrorCurve(rows)


def _fmt(x: float) -> str:
    return format(x, ".12g")


def curve_to_csv(curve: ErrorCurve) -> str:
    lines = [CSV_HEADER]
    for r in curve.rows:
        lines.append(
            ",".join(
                (
                    r.kind,
                    _fmt(r.a_target),
                    str(r.M),
                    str(r.n_queries),
                    _fmt(r.rmse),
                    _fmt(r.bias),
                    _fmt(r.percentile_error),
                    _fmt(r.crb),
                    _fmt(r.classical_bound),
                    _fmt(r.gamma_fit),
                    _fmt(r.delta_fit),
                )
            )
        )
    return "\n".join(lines) + "\n"


def _safe_tag(a: float) -> str:
    return _fmt(a).replace(".", "p").replace("-", "m").replace("+", "")


def _write_svg(curve: ErrorCurve, a: float, path: Path):
    from matplotlib.figure import Figure

    fig = Figure(figsize=(6.0, 4.5))
    ax = fig.add_subplot()
    kinds = [k for k in _SERIES_ORDER if k in curve.kinds()]
    kinds += [k for k in curve.kinds() if k not in kinds]
    for kind in kinds:
        series = curve.series(kind, a)
        if not series:
            continue
        nq = [r.n_queries for r in series]
        ax.loglog(nq, [r.rmse for r in series], "o-", label=kind, markersize=3.5)
        crb = [r.crb for r in series]
        if all(math.isfinite(c) for c in crb):
            ax.loglog(nq, crb, "--", linewidth=0.9)
    ax.set_xlabel("oracle queries")
    ax.set_ylabel("estimation error")
    ax.set_title(f"target probability {a:.6g}")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.savefig(path, format="svg")


def emit_outputs(curve: ErrorCurve, out_dir, stem: str = "sweep", fmt: str = "csv+svg") -> list[Path]:
    """Write the CSV (and optionally one SVG per target) under ``out_dir``."""
    if fmt not in ("csv", "csv+svg"):
        raise ValueError(f"unknown output format {fmt!r}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{stem}.csv"
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(curve_to_csv(curve))
    written = [csv_path]
    if fmt == "csv+svg":
        for a in curve.a_targets():
            svg_path = out_dir / f"{stem}_a{_safe_tag(a)}.svg"
            _write_svg(curve, a, svg_path)
            written.append(svg_path)
    return written
