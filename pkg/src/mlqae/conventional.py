"""Deterministic worst-case error of phase-register amplitude readout.

An ``m``-bit phase register can only return estimates on the grid
``sin^2(pi y / 2^m)``.  The angle ``theta_a`` shows up at the two register
targets ``theta_a 2^m / pi`` and its alias ``2^m - theta_a 2^m / pi``; the
readout lands on an integer next to one of them.  The pessimistic error
reported here is the worst over the integer below and above each target,
which upper-bounds what a single noiseless readout can be off by.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

QUERY_CONVENTIONS = ("amplitude-calls", "grover-calls")


@dataclass(frozen=True)
class ConventionalPoint:
    m: int
    grid_size: int
    n_queries: int
    worst_error: float


def conventional_error(a: float, m: int, query_convention: str = "amplitude-calls") -> ConventionalPoint:
    """Worst-of-four readout error for an ``m``-bit register.

    ``query_convention`` picks how the cost is counted: "amplitude-calls"
    charges the 2^m - 1 controlled amplification rounds two state
    preparations each plus one for the initial state, i.e. 2 (2^m - 1) + 1;
    "grover-calls" counts the amplification rounds alone.
    """
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"a must lie in [0, 1], got {a}")
    if m < 1:
        raise ValueError(f"register width must be >= 1, got {m}")
    if query_convention not in QUERY_CONVENTIONS:
        raise ValueError(f"unknown query convention {query_convention!r}")

    grid_size = 2**m
    theta = math.asin(math.sqrt(a))
    targets = (theta * grid_size / math.pi, grid_size - theta * grid_size / math.pi)
    worst = 0.0
    for t in targets:
        base = math.floor(t)
        for y in (base, base + 1):
            estimate = math.sin(math.pi * y / grid_size) ** 2
            worst = max(worst, abs(estimate - a))

    if query_convention == "amplitude-calls":
        n_queries = 2 * (grid_size - 1) + 1
    else:
        n_queries = grid_size - 1
    return ConventionalPoint(m, grid_size, n_queries, worst)


def conventional_curve(a: float, m_values, query_convention: str = "amplitude-calls") -> list[ConventionalPoint]:
    return [conventional_error(a, m, query_convention) for m in m_values]
