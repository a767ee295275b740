import math

import numpy as np
import pytest

from mlqae import (
    Amplitude,
    MeasurementData,
    MLConfig,
    MLResult,
    Schedule,
    log_likelihood,
    make_schedule,
    ml_estimate,
    sample_counts,
)
from mlqae.mle import _loglike_grid

HALF_PI = math.pi / 2.0

# Combined log-likelihood of hits (2, 7, 9) out of 10 shots at depths
# (0, 1, 2), evaluated at theta = 0.3.  Frozen from a 50-digit evaluation
# of sum_k [h ln sin^2((2m+1)t) + (N-h) ln cos^2((2m+1)t)].
LL_EIS2_AT_03 = -17.221379782903399


def test_log_likelihood_single_entry_half():
    # one depth-0 entry with p = 1/2: every shot contributes ln(1/2)
    data = MeasurementData((2,), 0)
    sched = Schedule(((0, 4),), kind="custom")
    got = log_likelihood(data, sched, math.pi / 4.0)
    assert got == pytest.approx(4.0 * math.log(0.5), abs=1e-12)


def test_log_likelihood_frozen_value():
    data = MeasurementData((2, 7, 9), 0)
    sched = make_schedule("eis", 2, 10)
    assert log_likelihood(data, sched, 0.3) == pytest.approx(LL_EIS2_AT_03, abs=1e-10)


def test_log_likelihood_matches_highprecision_sum():
    import mpmath as mp

    mp.mp.dps = 50
    data = MeasurementData((2, 7, 9), 0)
    sched = make_schedule("eis", 2, 10)
    t = mp.mpf(3) / 10
    want = mp.mpf(0)
    for h, (m, n) in zip(data.hits, sched.entries):
        p = mp.sin((2 * m + 1) * t) ** 2
        want += h * mp.log(p) + (n - h) * mp.log(1 - p)
    assert float(want) == pytest.approx(LL_EIS2_AT_03, abs=1e-12)
    assert log_likelihood(data, sched, 0.3) == pytest.approx(float(want), abs=1e-10)


def test_log_likelihood_array_input():
    data = MeasurementData((2, 7, 9), 0)
    sched = make_schedule("eis", 2, 10)
    thetas = np.array([0.2, 0.3, 0.4])
    vals = log_likelihood(data, sched, thetas)
    assert vals.shape == (3,)
    assert vals[1] == pytest.approx(LL_EIS2_AT_03, abs=1e-10)


def test_log_likelihood_additivity():
    # likelihood of a two-entry schedule is the sum of its parts
    sched = Schedule(((0, 30), (3, 20)), kind="custom")
    data = MeasurementData((11, 4), 0)
    part0 = log_likelihood(MeasurementData((11,), 0), Schedule(((0, 30),)), 0.4)
    part1 = log_likelihood(MeasurementData((4,), 0), Schedule(((3, 20),)), 0.4)
    assert log_likelihood(data, sched, 0.4) == pytest.approx(part0 + part1, abs=1e-10)


def test_log_likelihood_validation():
    sched = make_schedule("eis", 2, 10)
    with pytest.raises(ValueError):
        log_likelihood(MeasurementData((1, 2), 0), sched, 0.3)
    with pytest.raises(ValueError):
        log_likelihood(MeasurementData((1, 2, 11), 0), sched, 0.3)
    with pytest.raises(ValueError):
        log_likelihood(MeasurementData((1, 2, 3), 0), sched, -0.1)


def test_ml_config_validation():
    with pytest.raises(ValueError):
        MLConfig(grid_points=1)
    with pytest.raises(ValueError):
        MLConfig(refine_rounds=-1)
    with pytest.raises(ValueError):
        MLConfig(refine_factor=1.0)
    with pytest.raises(ValueError):
        MLConfig(prob_clamp=0.0)


def test_ml_estimate_classical_closed_form():
    # with depth 0 only, the maximiser is the empirical fraction
    sched = make_schedule("classical", 3, 50)
    data = MeasurementData((17, 11, 13, 15), 0)
    result = ml_estimate(data, sched)
    want = math.asin(math.sqrt(56.0 / 200.0))
    assert result.theta_hat == pytest.approx(want, abs=1e-8)
    assert result.a_hat == pytest.approx(0.28, abs=1e-8)
    # duplicate depths collapse to a single stage
    assert result.evaluations == 10_000 + 20 * 5


def test_ml_estimate_boundaries():
    sched = make_schedule("eis", 3, 25)
    zeros = ml_estimate(MeasurementData((0, 0, 0, 0), 0), sched)
    assert zeros.theta_hat == 0.0 and zeros.a_hat == 0.0
    full = ml_estimate(MeasurementData((25, 25, 25, 25), 0), sched)
    assert full.theta_hat == HALF_PI and full.a_hat == 1.0


def test_ml_estimate_degenerate_peaks_pick_smallest():
    # a lone depth-5 entry at h = N/2 has likelihood peaks wherever
    # sin^2(11 theta) = 1/2; the smallest such angle is pi/44
    sched = Schedule(((5, 100),), kind="custom")
    result = ml_estimate(MeasurementData((50,), 0), sched)
    assert result.theta_hat == pytest.approx(math.pi / 44.0, abs=1e-6)


def test_ml_estimate_matches_flat_grid_oracle():
    # staged search against a brute-force scan of 10^7 + 1 points
    sched = make_schedule("eis", 6, 100)
    amp = Amplitude.from_probability(1.0 / 6.0)
    data = sample_counts(sched, amp, 11)
    result = ml_estimate(data, sched)

    points = 10_000_001
    grid = np.linspace(0.0, HALF_PI, points)
    chunk = 1_000_000
    vmax = -np.inf
    for start in range(0, points, chunk):
        vals = _loglike_grid(data.hits, sched.shots, sched.powers, grid[start : start + chunk], 1e-12)
        vmax = max(vmax, float(vals.max()))
    best = None
    for start in range(0, points, chunk):
        vals = _loglike_grid(data.hits, sched.shots, sched.powers, grid[start : start + chunk], 1e-12)
        idx = np.nonzero(vals >= vmax - 1e-9)[0]
        if idx.size:
            best = float(grid[start + idx[0]])
            break
    spacing = HALF_PI / (points - 1)
    assert best is not None
    assert abs(result.theta_hat - best) < 2.0 * spacing
    assert result.log_likelihood_at_max >= vmax - 1e-9


def test_ml_estimate_recovers_target_with_growing_schedule():
    # average error shrinks sharply as depths are added at fixed shots
    amp = Amplitude.from_probability(1.0 / 6.0)

    def mean_err(M):
        errs = []
        for rep in range(30):
            sched = make_schedule("eis", M, 100)
            data = sample_counts(sched, amp, 1_000 * M + rep)
            errs.append(abs(ml_estimate(data, sched).a_hat - amp.a))
        return float(np.mean(errs))

    assert mean_err(2) / mean_err(8) > 8.0


def test_ml_estimate_result_type():
    sched = make_schedule("lis", 3, 20)
    data = sample_counts(sched, Amplitude.from_probability(0.4), 2)
    result = ml_estimate(data, sched)
    assert isinstance(result, MLResult)
    assert 0.0 <= result.theta_hat <= HALF_PI
    assert result.a_hat == pytest.approx(math.sin(result.theta_hat) ** 2, abs=1e-15)
    assert result.evaluations > 10_000


def test_ml_estimate_is_deterministic():
    sched = make_schedule("eis", 5, 100)
    data = sample_counts(sched, Amplitude.from_probability(0.3), 21)
    first = ml_estimate(data, sched)
    second = ml_estimate(data, sched)
    assert first.theta_hat == second.theta_hat
    assert first.evaluations == second.evaluations
