"""Measurement model for depth-scheduled amplitude sampling.

A target probability ``a = sin^2(theta)`` is probed by circuits that apply
the amplification operator ``m`` times before measuring; each such circuit
hits the good state with probability ``sin^2((2m+1) theta)``.  This module
holds the value types (amplitude, schedule, measured counts) and the seeded
sampler that draws counts from the exact model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HALF_PI = math.pi / 2.0

SCHEDULE_KINDS = ("classical", "lis", "eis", "custom")

# Bernoulli draws below this shot count, single-uniform CDF inversion above.
_BERNOULLI_LIMIT = 1024

_KIND_IDS = {kind: i for i, kind in enumerate(SCHEDULE_KINDS)}


@dataclass(frozen=True)
class Amplitude:
    """Canonical angle representation of a probability ``a = sin^2(theta)``.

    The angle is the stored field; the probability is derived on demand so
    the pair can never drift apart.
    """

    theta: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= HALF_PI:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta}")

    @property
    def a(self) -> float:
        return math.sin(self.theta) ** 2

    @classmethod
    def from_probability(cls, a: float) -> "Amplitude":
        if not 0.0 <= a <= 1.0:
            raise ValueError(f"probability must lie in [0, 1], got {a}")
        return cls(math.asin(math.sqrt(a)))

    @classmethod
    def from_angle(cls, theta: float) -> "Amplitude":
        return cls(float(theta))


@dataclass(frozen=True)
class Schedule:
    """Ordered amplification depths and shot counts ``(m_k, N_k)``."""

    entries: tuple[tuple[int, int], ...]
    kind: str = "custom"

    def __post_init__(self):
        entries = tuple((int(m), int(n)) for m, n in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValueError("schedule must contain at least one entry")
        if self.kind not in SCHEDULE_KINDS:
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        for m, n in entries:
            if m < 0:
                raise ValueError(f"amplification depth must be >= 0, got {m}")
            if n < 1:
                raise ValueError(f"shot count must be >= 1, got {n}")
        ms = [m for m, _ in entries]
        if self.kind == "classical" and any(m != 0 for m in ms):
            raise ValueError("classical schedules use depth 0 everywhere")
        if self.kind == "lis" and ms != list(range(len(ms))):
            raise ValueError("linear schedules use depth k at position k")
        if self.kind == "eis":
            expected = [0] + [2 ** (k - 1) for k in range(1, len(ms))]
            if ms != expected:
                raise ValueError("exponential schedules use depths 0,1,2,4,...")

    @property
    def powers(self) -> tuple[int, ...]:
        return tuple(m for m, _ in self.entries)

    @property
    def shots(self) -> tuple[int, ...]:
        return tuple(n for _, n in self.entries)

    @property
    def total_shots(self) -> int:
        return sum(n for _, n in self.entries)

    @property
    def total_queries(self) -> int:
        """Oracle queries consumed: sum of N_k (2 m_k + 1)."""
        return sum(n * (2 * m + 1) for m, n in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class MeasurementData:
    """Good-state hit counts aligned with a schedule, plus the seed used."""

    hits: tuple[int, ...]
    seed: int

    def __post_init__(self):
        hits = tuple(int(h) for h in self.hits)
        object.__setattr__(self, "hits", hits)
        if any(h < 0 for h in hits):
            raise ValueError("hit counts must be non-negative")


def good_probability(theta: float, m: int) -> float:
    """Probability of the good state after ``m`` amplification rounds."""
    if not 0.0 <= theta <= HALF_PI:
        raise ValueError(f"theta must lie in [0, pi/2], got {theta}")
    m = int(m)
    if m < 0:
        raise ValueError(f"amplification depth must be >= 0, got {m}")
    return math.sin((2 * m + 1) * theta) ** 2


def make_schedule(kind: str, M: int, n_shot: int) -> Schedule:
    """Build the ``M + 1`` entry schedule of the given kind.

    ``classical`` keeps every depth at zero, ``lis`` grows depth linearly
    (0, 1, 2, ...), ``eis`` doubles it after the first step (0, 1, 2, 4, ...).
    Every entry uses the same shot count.
    """
    if M < 0:
        raise ValueError(f"M must be >= 0, got {M}")
    if n_shot < 1:
        raise ValueError(f"n_shot must be >= 1, got {n_shot}")
    if kind == "classical":
        ms = [0] * (M + 1)
    elif kind == "lis":
        ms = list(range(M + 1))
    elif kind == "eis":
        ms = [0] + [2 ** (k - 1) for k in range(1, M + 1)]
    else:
        raise ValueError(f"unknown schedule kind {kind!r}")
    return Schedule(tuple((m, n_shot) for m in ms), kind=kind)


def _substream(seed: int, k: int) -> np.random.Generator:
    """Independent generator for entry ``k``: stream id is hash(seed, k).

    ``SeedSequence`` mixes its integer entropy pool with a fixed integer
    hash, so the mapping is platform independent and the same whether the
    entries are sampled serially or in parallel.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, k])))


def _binomial_count(rng: np.random.Generator, n: int, p: float) -> int:
    if n < _BERNOULLI_LIMIT:
        return int(np.count_nonzero(rng.random(n) < p))
    # One uniform inverted through the exact binomial CDF keeps the draw
    # reproducible without consuming an n-dependent amount of the stream.
    from scipy.stats import binom

    return int(binom.ppf(rng.random(), n, p))


def draw_hits(probs, shots, seed: int) -> tuple[int, ...]:
    """Draw one binomial count per entry, each from its own substream."""
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    hits = []
    for k, (p, n) in enumerate(zip(probs, shots)):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability must lie in [0, 1], got {p}")
        hits.append(_binomial_count(_substream(seed, k), int(n), float(p)))
    return tuple(hits)


def sample_counts(schedule: Schedule, amplitude: Amplitude, seed: int) -> MeasurementData:
    """Sample hit counts for every schedule entry at the given amplitude."""
    probs = [good_probability(amplitude.theta, m) for m in schedule.powers]
    return MeasurementData(draw_hits(probs, schedule.shots, seed), int(seed))


def trial_seed(seed: int, kind: str, a: float, M: int, rep: int) -> int:
    """Derive the per-repetition seed used by sweeps.

    Mixes (seed, kind, a, M, repetition) through a seed sequence so every
    repetition owns an independent stream no matter how work is split
    across processes.  The float target enters through its bit pattern.
    """
    a_bits = int(np.float64(a).view(np.uint64))
    ss = np.random.SeedSequence([int(seed), _KIND_IDS[kind], a_bits, int(M), int(rep)])
    lo, hi = (int(w) for w in ss.generate_state(2, np.uint64))
    return lo | (hi << 64)
