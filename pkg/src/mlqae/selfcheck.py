"""Fast oracle-equivalence battery behind ``mlqae selftest``.

Every check pits an implementation against an independent route to the
same number: closed-form information vs exhaustive outcome enumeration,
staged likelihood search vs a flat grid, statevector probabilities vs the
model identity, and the two constructions of the amplification operator.
"""

from __future__ import annotations

import math

import numpy as np

from .conventional import conventional_error
from .mle import MLConfig, log_likelihood, ml_estimate
from .model import Amplitude, MeasurementData, Schedule, make_schedule, sample_counts
from .montecarlo import (
    IntegralProblem,
    apply_q,
    exact_sum,
    good_state_probability,
    prepare_state,
    q_matrix,
    q_matrix_reference,
)
from .stats import cramer_rao_error, classical_error_bound, fisher_information, fisher_oracle, query_count

_passed = 0
_failed = 0


def _check(name: str, ok: bool, detail: str = ""):
    global _passed, _failed
    if ok:
        _passed += 1
        print(f"[PASS] {name}")
    else:
        _failed += 1
        print(f"[FAIL] {name}  {detail}")


def _rel(x: float, y: float) -> float:
    return abs(x - y) / max(abs(x), abs(y), 1e-300)


def run() -> int:
    global _passed, _failed
    _passed = 0
    _failed = 0

    for kind, M, n_shot, a in (
        ("classical", 2, 3, 0.3),
        ("lis", 2, 3, 0.2),
        ("eis", 2, 4, 0.3),
        ("eis", 3, 3, 1.0 / 6.0),
    ):
        sched = make_schedule(kind, M, n_shot)
        closed = fisher_information(sched, a)
        oracle = fisher_oracle(sched, a)
        _check(
            f"fisher enumeration matches closed form ({kind} M={M} a={a:.4g})",
            _rel(closed, oracle) < 1e-9,
            f"closed={closed!r} oracle={oracle!r}",
        )

    for kind, M, seed, a in (("eis", 5, 3, 1.0 / 6.0), ("lis", 5, 4, 0.25)):
        sched = make_schedule(kind, M, 100)
        data = sample_counts(sched, Amplitude.from_probability(a), seed)
        result = ml_estimate(data, sched)
        grid = np.linspace(0.0, math.pi / 2.0, 1_000_001)
        vals = log_likelihood(data, sched, grid)
        flat = float(grid[int(np.argmax(vals))])
        tol = 2.0 * (math.pi / 2.0) / 1_000_000
        _check(
            f"staged search matches flat likelihood grid ({kind} seed={seed})",
            abs(result.theta_hat - flat) <= tol,
            f"staged={result.theta_hat!r} flat={flat!r}",
        )

    problem = IntegralProblem(2, math.pi / 4.0)
    state = prepare_state(problem)
    theta = math.asin(math.sqrt(exact_sum(problem)))
    ok = True
    worst = 0.0
    for m in range(9):
        p = good_state_probability(apply_q(state, problem, m))
        worst = max(worst, abs(p - math.sin((2 * m + 1) * theta) ** 2))
    ok = worst < 1e-10
    _check("statevector probabilities follow the depth identity", ok, f"worst={worst:.3g}")

    for n in (1, 2):
        prob = IntegralProblem(n, math.pi / 4.0)
        gap = float(np.max(np.abs(q_matrix(prob) - q_matrix_reference(prob))))
        _check(f"both operator constructions agree (n={n})", gap < 1e-12, f"gap={gap:.3g}")

    eis = make_schedule("eis", 4, 100)
    _check("doubling schedule query count", query_count(eis) == 3500, f"got {query_count(eis)}")
    lis = make_schedule("lis", 7, 50)
    _check("linear schedule query count", query_count(lis) == 50 * 64, f"got {query_count(lis)}")

    a = 1.0 / 6.0
    crb = cramer_rao_error(eis, a)
    floor = math.sqrt(a * (1 - a)) / query_count(eis)
    classical = classical_error_bound(a, query_count(eis))
    _check("error floor ordering", floor <= crb <= classical, f"{floor} {crb} {classical}")

    point = conventional_error(0.5, 2)
    _check("register readout hand case", abs(point.worst_error - 0.5) < 1e-15, f"{point}")

    print(f"{_passed} passed, {_failed} failed")
    return 0 if _failed == 0 else 1
