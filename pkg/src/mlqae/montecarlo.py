"""Dense statevector simulation of the sine-integral amplitude instance.

The integral ``(1/b) int_0^b sin^2(x) dx`` discretised on ``2^n`` midpoints
becomes the good-state probability of an ``n + 1`` qubit circuit: Hadamards
put the domain register into uniform superposition and a ladder of
Y-rotations writes ``sin((x + 1/2) b / 2^n)`` onto the ancilla.  Basis
index convention: the ancilla is the least significant bit, so amplitudes
reshape to ``(2^n, 2)`` as ``[x, ancilla]``.

The amplification operator is built from the two reflections
``U_psi U_bad``: ``U_bad`` flips the sign of every ancilla-0 component and
``U_psi = A (I - 2|0><0|) A^{-1}`` reflects about the prepared state.  This
equals the textbook form ``-(A S_0 A^{-1}) S_good`` including its leading
sign, which ``q_matrix_reference`` builds independently for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mle import MLConfig, ml_estimate
from .model import MeasurementData, Schedule, draw_hits
from .stats import BoundReport, bound_report

_MAX_QUBITS = 20
_ANCILLA_TOL = 1e-9


@dataclass(frozen=True)
class IntegralProblem:
    """Midpoint discretisation of sin^2 on [0, b_max] with 2^n points."""

    n: int
    b_max: float

    def __post_init__(self):
        if not 1 <= self.n <= _MAX_QUBITS:
            raise ValueError(f"n must lie in [1, {_MAX_QUBITS}], got {self.n}")
        if not 0.0 < self.b_max <= math.pi:
            raise ValueError(f"b_max must lie in (0, pi], got {self.b_max}")

    @property
    def angles(self) -> np.ndarray:
        """Rotation half-angles (x + 1/2) b_max / 2^n for each x."""
        scale = self.b_max / 2**self.n
        return (np.arange(2**self.n) + 0.5) * scale


@dataclass
class StateVector:
    """Complex amplitudes over n domain qubits plus one ancilla."""

    amplitudes: np.ndarray
    n: int

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (2 ** (self.n + 1),):
            raise ValueError("amplitude vector length must be 2**(n+1)")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def view2(self) -> np.ndarray:
        return self.amplitudes.reshape(2**self.n, 2)


def zero_state(n: int) -> StateVector:
    amps = np.zeros(2 ** (n + 1), dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(amps, n)


def _hadamard_domain(amps2: np.ndarray):
    """H on every domain qubit, in place (fast Walsh-Hadamard butterflies)."""
    d = amps2.shape[0]
    inv = 1.0 / math.sqrt(2.0)
    step = 1
    while step < d:
        v = amps2.reshape(-1, 2, step, 2)
        a = v[:, 0].copy()
        b = v[:, 1].copy()
        v[:, 0] = (a + b) * inv
        v[:, 1] = (a - b) * inv
        step *= 2


def _rotate_ancilla(amps2: np.ndarray, half_angles, mask=None):
    """Y-rotation of the ancilla by 2*half_angles, optionally masked on x."""
    c = np.cos(half_angles)
    s = np.sin(half_angles)
    if mask is None:
        a0 = amps2[:, 0].copy()
        a1 = amps2[:, 1].copy()
        amps2[:, 0] = c * a0 - s * a1
        amps2[:, 1] = s * a0 + c * a1
    else:
        a0 = amps2[mask, 0].copy()
        a1 = amps2[mask, 1].copy()
        amps2[mask, 0] = c * a0 - s * a1
        amps2[mask, 1] = s * a0 + c * a1


def _rotation_ladder(amps2: np.ndarray, problem: IntegralProblem, invert: bool):
    """The integrand rotation as its gate sequence.

    One unconditional ancilla rotation by ``b_max / 2^n`` plus, for each
    domain bit j, a controlled rotation by ``b_max / 2^(n-1-j)`` (all in
    full-rotation units, i.e. twice the half-angle actually applied, to
    match the half-angle convention of Y-rotations).  Composing rotations
    about a single axis adds the angles, which reproduces
    ``(x + 1/2) b_max / 2^n`` exactly.
    """
    n = problem.n
    sign = -1.0 if invert else 1.0
    x = np.arange(2**n)
    _rotate_ancilla(amps2, sign * problem.b_max / 2 ** (n + 1))
    for j in range(n):
        half = problem.b_max / 2 ** (n - j)
        _rotate_ancilla(amps2, sign * half, mask=(x >> j) & 1 == 1)


def apply_p(state: StateVector) -> StateVector:
    """Uniform superposition over the domain register."""
    out = state.amplitudes.copy()
    _hadamard_domain(out.reshape(2**state.n, 2))
    return StateVector(out, state.n)


def apply_r(state: StateVector, problem: IntegralProblem) -> StateVector:
    """Integrand rotation; requires every ancilla amplitude to be 0."""
    if state.n != problem.n:
        raise ValueError("state and problem disagree on qubit count")
    view = state.view2()
    if np.abs(view[:, 1]).max() > _ANCILLA_TOL:
        raise ValueError("integrand rotation expects the ancilla in |0>")
    out = state.amplitudes.copy()
    _rotation_ladder(out.reshape(2**state.n, 2), problem, invert=False)
    return StateVector(out, state.n)


def prepare_state(problem: IntegralProblem) -> StateVector:
    return apply_r(apply_p(zero_state(problem.n)), problem)


def _apply_a(amps2: np.ndarray, problem: IntegralProblem):
    _hadamard_domain(amps2)
    _rotation_ladder(amps2, problem, invert=False)


def _apply_a_inverse(amps2: np.ndarray, problem: IntegralProblem):
    _rotation_ladder(amps2, problem, invert=True)
    _hadamard_domain(amps2)


def _reflect_zero(amps2: np.ndarray):
    amps2.reshape(-1)[0] *= -1.0


def _apply_q_once(amps2: np.ndarray, problem: IntegralProblem):
    amps2[:, 0] *= -1.0  # reflection leaving only ancilla-1 components fixed
    _apply_a_inverse(amps2, problem)
    _reflect_zero(amps2)
    _apply_a(amps2, problem)


def apply_q(state: StateVector, problem: IntegralProblem, times: int = 1) -> StateVector:
    """Apply the amplification operator ``times`` times."""
    if state.n != problem.n:
        raise ValueError("state and problem disagree on qubit count")
    if times < 0:
        raise ValueError("times must be >= 0")
    out = state.amplitudes.copy()
    view = out.reshape(2**state.n, 2)
    for _ in range(times):
        _apply_q_once(view, problem)
    return StateVector(out, state.n)


def good_state_probability(state: StateVector) -> float:
    """Probability of measuring the ancilla in |1>."""
    view = state.view2()
    return float(np.sum(np.abs(view[:, 1]) ** 2))


def _basis_column(dim: int, col: int) -> np.ndarray:
    v = np.zeros(dim, dtype=np.complex128)
    v[col] = 1.0
    return v


def q_matrix(problem: IntegralProblem) -> np.ndarray:
    """Amplification operator as a dense matrix (reflection construction)."""
    dim = 2 ** (problem.n + 1)
    cols = []
    for col in range(dim):
        v = _basis_column(dim, col)
        _apply_q_once(v.reshape(-1, 2), problem)
        cols.append(v)
    return np.stack(cols, axis=1)


def q_matrix_reference(problem: IntegralProblem) -> np.ndarray:
    """Same operator from the textbook product, leading minus included."""
    dim = 2 ** (problem.n + 1)
    cols = []
    for col in range(dim):
        v = _basis_column(dim, col)
        view = v.reshape(-1, 2)
        view[:, 1] *= -1.0  # sign flip on the good states
        _apply_a_inverse(view, problem)
        _reflect_zero(view)
        _apply_a(view, problem)
        v *= -1.0
        cols.append(v)
    return np.stack(cols, axis=1)


def exact_sum(problem: IntegralProblem) -> float:
    """Discretised integral: mean of sin^2 over the midpoint angles."""
    return float(math.fsum(np.sin(problem.angles) ** 2) / 2**problem.n)


def integral_closed_form(b_max: float) -> float:
    """(1/b) int_0^b sin^2(x) dx, the continuum limit of ``exact_sum``."""
    return 0.5 - math.sin(2.0 * b_max) / (4.0 * b_max)


def estimate_integral(
    problem: IntegralProblem,
    schedule: Schedule,
    config: MLConfig = MLConfig(),
    seed: int = 0,
) -> tuple[float, BoundReport]:
    """Simulate the scheduled measurements and recover the discretised sum.

    For every schedule entry the ancilla-1 probability after ``m_k``
    amplification rounds is read off the statevector, counts are drawn from
    it with the per-entry substream rule, and the maximum-likelihood
    estimate of the probability is returned together with the theory bounds
    evaluated at the exact sum.
    """
    state = prepare_state(problem)
    probs = []
    current = 0
    work = state
    for m in schedule.powers:
        if m < current:
            work = state
            current = 0
        if m > current:
            work = apply_q(work, problem, m - current)
            current = m
        probs.append(good_state_probability(work))
    hits = draw_hits(probs, schedule.shots, seed)
    result = ml_estimate(MeasurementData(hits, int(seed)), schedule, config)
    return result.a_hat, bound_report(schedule, exact_sum(problem))
