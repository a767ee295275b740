"""Information bounds and error-scaling fits for amplitude schedules.

The Fisher information of a schedule has the closed form
``sum_k N_k (2 m_k + 1)^2 / (a (1 - a))``; its inverse square root is the
Cramer-Rao error floor, to be compared against the classical-sampling floor
``sqrt(a (1 - a) / N_q)`` at the same query budget.  ``fisher_oracle``
recomputes the information by brute-force enumeration of every possible
outcome vector, which is the independent cross-check for the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Schedule


@dataclass(frozen=True)
class BoundReport:
    """Theory bounds of a schedule at a target probability."""

    fisher: float
    n_queries: int
    crb_error: float
    classical_bound: float


@dataclass(frozen=True)
class SlopeFit:
    """Power-law fit ``log10(err) = gamma log10(N_q) + delta``."""

    gamma: float
    delta: float
    r_squared: float
    nq_range: tuple[float, float]


def _check_probability(a: float):
    if not 0.0 < a < 1.0:
        raise ValueError(f"a must lie strictly inside (0, 1), got {a}")


def query_count(schedule: Schedule) -> int:
    """Total oracle queries: each depth-m circuit costs 2m + 1 per shot."""
    return schedule.total_queries


def fisher_information(schedule: Schedule, a: float) -> float:
    _check_probability(a)
    weights = sum(n * (2 * m + 1) ** 2 for m, n in schedule.entries)
    return weights / (a * (1.0 - a))


def cramer_rao_error(schedule: Schedule, a: float) -> float:
    return 1.0 / math.sqrt(fisher_information(schedule, a))


def classical_error_bound(a: float, n_queries: int) -> float:
    """Best possible error when every query is an unamplified sample."""
    _check_probability(a)
    if n_queries < 1:
        raise ValueError("n_queries must be >= 1")
    return math.sqrt(a * (1.0 - a) / n_queries)


def bound_report(schedule: Schedule, a: float) -> BoundReport:
    nq = query_count(schedule)
    return BoundReport(
        fisher=fisher_information(schedule, a),
        n_queries=nq,
        crb_error=cramer_rao_error(schedule, a),
        classical_bound=classical_error_bound(a, nq),
    )


def fisher_oracle(
    schedule: Schedule,
    a: float,
    derivative: str = "analytic",
    max_outcomes: int = 1_000_000,
) -> float:
    """Fisher information by exhaustive enumeration of outcome vectors.

    Walks every hit vector ``(h_0, ..., h_M)``, weights the squared score by
    the joint binomial probability, and sums.  The score's derivative with
    respect to ``a`` is taken analytically through the chain rule
    ``d theta / d a = 1 / (2 sqrt(a (1 - a)))`` by default; pass
    ``derivative="central-fd"`` for a finite-difference cross-check.
    Intended for small instances only: the outcome count
    ``prod_k (N_k + 1)`` must stay within ``max_outcomes``.

    Entries whose hit probability is 0 or 1 (the depth resolves the angle
    deterministically) are scored by continuity: both the squared slope and
    the variance vanish quadratically there, and their ratio tends to the
    same ``N (2m+1)^2 / (a (1 - a))`` term the closed form assigns, so that
    amount is added directly instead of enumerating a 0/0.
    """
    _check_probability(a)
    if derivative not in ("analytic", "central-fd"):
        raise ValueError(f"unknown derivative mode {derivative!r}")

    outcomes = 1
    for _, n in schedule.entries:
        outcomes *= n + 1
    if outcomes > max_outcomes:
        raise ValueError(f"{outcomes} outcome vectors exceed the cap {max_outcomes}")

    from scipy.stats import binom

    theta = math.asin(math.sqrt(a))

    pmfs = []
    scores = []
    deterministic = 0.0
    for m, n in schedule.entries:
        h = np.arange(n + 1, dtype=float)
        w = 2 * m + 1
        p = math.sin(w * theta) ** 2
        if min(p, 1.0 - p) < 1e-12:
            deterministic += n * w * w / (a * (1.0 - a))
            continue
        pmfs.append(binom.pmf(np.arange(n + 1), n, p))
        if derivative == "analytic":
            dp_da = w * math.sin(2 * w * theta) / (2.0 * math.sqrt(a * (1.0 - a)))
            scores.append((h / p - (n - h) / (1.0 - p)) * dp_da)
        else:
            step = 1e-6
            lls = []
            for aa in (a + step, a - step):
                th = math.asin(math.sqrt(aa))
                pp = math.sin(w * th) ** 2
                lls.append(h * math.log(pp) + (n - h) * math.log(1.0 - pp))
            scores.append((lls[0] - lls[1]) / (2.0 * step))

    if not pmfs:
        return deterministic
    weight = pmfs[0]
    score = scores[0]
    for pmf_k, score_k in zip(pmfs[1:], scores[1:]):
        weight = np.multiply.outer(weight, pmf_k)
        score = np.add.outer(score, score_k)
    return float(np.sum(weight * score * score)) + deterministic


def fit_error_exponent(points, nq_range: tuple[float, float]) -> SlopeFit:
    """Least-squares power-law fit to (N_q, error) points inside the window.

    Needs at least three in-window points with positive error.
    """
    lo, hi = nq_range
    if not lo < hi:
        raise ValueError("nq_range must be increasing")
    selected = [(nq, err) for nq, err in points if lo <= nq <= hi]
    if len(selected) < 3:
        raise ValueError(f"need >= 3 points inside [{lo}, {hi}], got {len(selected)}")
    if any(err <= 0.0 or nq <= 0.0 for nq, err in selected):
        raise ValueError("points must have positive N_q and error")
    x = np.log10([nq for nq, _ in selected])
    y = np.log10([err for _, err in selected])
    gamma, delta = np.polyfit(x, y, 1)
    resid = y - (gamma * x + delta)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return SlopeFit(float(gamma), float(delta), r_squared, (float(lo), float(hi)))
