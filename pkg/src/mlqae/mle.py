"""Maximum-likelihood recovery of the amplitude from scheduled counts.

The combined log-likelihood of counts taken at several amplification depths
is maximised over ``theta`` in [0, pi/2] with a staged grid search: a dense
scan of the depth-0 likelihood pins the coarse location, then each extra
depth narrows the window around the running maximiser (its factor
oscillates faster, so the window is one half-period of the last depth
searched) and re-grids it at finer resolution.  A short local-shrink loop
polishes the winner.  No derivatives are used anywhere, so the clamped
likelihood may be evaluated well inside saturated regions without care.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import HALF_PI, MeasurementData, Schedule

# Grid values within this log-likelihood distance of the maximum count as
# ties; the smallest angle among them wins.  Keeps degenerate likelihoods
# (several exactly-equal peaks) deterministic without disturbing real data,
# where distinct candidates differ by O(1).
_TIE_TOL = 1e-9


@dataclass(frozen=True)
class MLConfig:
    """Knobs of the staged grid search."""

    grid_points: int = 10_000
    refine_rounds: int = 20
    refine_factor: float = 2.0
    prob_clamp: float = 1e-12

    def __post_init__(self):
        if self.grid_points < 2:
            raise ValueError("grid_points must be >= 2")
        if self.refine_rounds < 0:
            raise ValueError("refine_rounds must be >= 0")
        if self.refine_factor <= 1.0:
            raise ValueError("refine_factor must be > 1")
        if not 0.0 < self.prob_clamp <= 1e-6:
            raise ValueError("prob_clamp must lie in (0, 1e-6]")


@dataclass(frozen=True)
class MLResult:
    theta_hat: float
    a_hat: float
    log_likelihood_at_max: float
    evaluations: int


def _check_alignment(data: MeasurementData, schedule: Schedule):
    if len(data.hits) != len(schedule):
        raise ValueError(
            f"data carries {len(data.hits)} counts for {len(schedule)} schedule entries"
        )
    for h, (_, n) in zip(data.hits, schedule.entries):
        if h > n:
            raise ValueError(f"hit count {h} exceeds shot count {n}")


def _loglike_grid(hits, shots, powers, thetas, clamp):
    """Vectorised combined log-likelihood at each angle in ``thetas``.

    Uses sin^2 x = (1 - cos 2x)/2 so one cosine serves both the good and
    bad factors of every term.
    """
    freq = 2.0 * (2.0 * np.asarray(powers, dtype=float) + 1.0)
    c = np.cos(np.outer(freq, thetas))
    p = np.clip(0.5 * (1.0 - c), clamp, 1.0 - clamp)
    q = np.clip(0.5 * (1.0 + c), clamp, 1.0 - clamp)
    h = np.asarray(hits, dtype=float)
    n = np.asarray(shots, dtype=float)
    return h @ np.log(p) + (n - h) @ np.log(q)


def log_likelihood(data: MeasurementData, schedule: Schedule, theta, prob_clamp: float = 1e-12):
    """Combined log-likelihood of the counts at angle(s) ``theta``.

    Each schedule entry contributes ``h ln p + (N - h) ln(1 - p)`` with
    ``p = sin^2((2m+1) theta)`` clamped into [prob_clamp, 1 - prob_clamp].
    Accepts a scalar or an array of angles.
    """
    _check_alignment(data, schedule)
    thetas = np.atleast_1d(np.asarray(theta, dtype=float))
    if np.any(thetas < 0.0) or np.any(thetas > HALF_PI):
        raise ValueError("theta must lie in [0, pi/2]")
    vals = _loglike_grid(data.hits, schedule.shots, schedule.powers, thetas, prob_clamp)
    return float(vals[0]) if np.isscalar(theta) or np.ndim(theta) == 0 else vals


def _argmax_smallest(grid, vals) -> float:
    """Maximising angle; ties within _TIE_TOL resolve to the smallest."""
    vmax = vals.max()
    return float(grid[int(np.argmax(vals >= vmax - _TIE_TOL))])


def _merge_duplicate_powers(hits, shots, powers):
    """Pool entries that share a depth; the likelihood is unchanged."""
    order: list[int] = []
    h_acc: dict[int, int] = {}
    n_acc: dict[int, int] = {}
    for h, n, m in zip(hits, shots, powers):
        if m not in h_acc:
            order.append(m)
            h_acc[m] = 0
            n_acc[m] = 0
        h_acc[m] += h
        n_acc[m] += n
    return (
        [h_acc[m] for m in order],
        [n_acc[m] for m in order],
        order,
    )


def ml_estimate(data: MeasurementData, schedule: Schedule, config: MLConfig = MLConfig()) -> MLResult:
    """Maximise the combined likelihood over [0, pi/2].

    Degenerate all-zero (all-hit) data pins the boundary 0 (pi/2) directly.
    Otherwise the staged search described in the module docstring runs; it
    needs no starting value and never leaves the closed interval.
    """
    _check_alignment(data, schedule)
    hits, shots, powers = _merge_duplicate_powers(data.hits, schedule.shots, schedule.powers)
    clamp = config.prob_clamp

    total_h = sum(hits)
    if total_h == 0 or total_h == sum(shots):
        theta = 0.0 if total_h == 0 else HALF_PI
        ll = float(_loglike_grid(hits, shots, powers, np.array([theta]), clamp)[0])
        return MLResult(theta, math.sin(theta) ** 2, ll, 1)

    evaluations = 0
    lo, hi = 0.0, HALF_PI
    spacing = (hi - lo) / (config.grid_points - 1)
    grid = np.linspace(lo, hi, config.grid_points)
    vals = _loglike_grid(hits[:1], shots[:1], powers[:1], grid, clamp)
    theta = _argmax_smallest(grid, vals)
    evaluations += grid.size

    for stage in range(1, len(powers)):
        half_width = math.pi / (2.0 * (2 * powers[stage - 1] + 1))
        lo = max(0.0, theta - half_width)
        hi = min(HALF_PI, theta + half_width)
        width = hi - lo
        spacing = max(spacing / config.refine_factor, width / (config.grid_points - 1))
        npts = max(2, int(round(width / spacing)) + 1)
        grid = np.linspace(lo, hi, npts)
        vals = _loglike_grid(hits[: stage + 1], shots[: stage + 1], powers[: stage + 1], grid, clamp)
        theta = _argmax_smallest(grid, vals)
        spacing = width / (npts - 1)
        evaluations += npts

    # Plain argmax here: the window already sits inside a single peak, and
    # the tie rule would otherwise walk the estimate leftwards once all
    # window values agree to within the tolerance.
    npts = 2 * math.ceil(config.refine_factor) + 1
    for _ in range(config.refine_rounds):
        lo = max(0.0, theta - spacing)
        hi = min(HALF_PI, theta + spacing)
        grid = np.linspace(lo, hi, npts)
        vals = _loglike_grid(hits, shots, powers, grid, clamp)
        theta = float(grid[int(np.argmax(vals))])
        spacing = (hi - lo) / (npts - 1)
        evaluations += npts

    ll = float(_loglike_grid(hits, shots, powers, np.array([theta]), clamp)[0])
    return MLResult(theta, math.sin(theta) ** 2, ll, evaluations)
