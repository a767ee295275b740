import math

import numpy as np
import pytest

from mlqae import conventional_curve, conventional_error


def test_register_hand_case():
    # a = 1/2 on a 4-point register: targets are 1 and 3, candidate
    # integers {0,1,2,3,4} map to estimates {0, 1/2, 1, 1/2, 0}, so the
    # worst candidate misses by exactly 1/2
    point = conventional_error(0.5, 2)
    assert point.grid_size == 4
    assert point.worst_error == pytest.approx(0.5, abs=1e-15)
    assert point.n_queries == 2 * 3 + 1


def test_exact_grid_point_still_pays_neighbour():
    # sin^2(pi/8) sits exactly on the 3-bit grid; the floor candidate is
    # exact but the ceiling candidate is one grid step away
    a = math.sin(math.pi / 8.0) ** 2
    point = conventional_error(a, 3)
    neighbour = math.sin(2.0 * math.pi / 8.0) ** 2
    assert point.worst_error == pytest.approx(neighbour - a, abs=1e-14)


def test_error_decreases_two_bits_at_a_time():
    # grid resolution doubles per bit, so m -> m+2 must strictly shrink
    # the worst-case error for a generic target
    a = 1.0 / 48.0
    errs = [conventional_error(a, m).worst_error for m in range(3, 21)]
    for lo, hi in zip(errs[2:], errs[:-2]):
        assert lo < hi


def test_error_envelope_inverse_in_grid_size():
    # worst error stays below c / 2^m; the constant 1.01 was fitted as
    # max(worst_error * 2^m) over this range (measured 1.005)
    a = 1.0 / 48.0
    for m in range(3, 21):
        assert conventional_error(a, m).worst_error <= 1.01 / 2**m


def test_error_scales_inverse_linearly():
    # worst error ~ 1/N_q: fitted log-log slope within 0.05 of -1
    a = 1.0 / 48.0
    points = conventional_curve(a, range(5, 19))
    x = np.log10([p.n_queries for p in points])
    y = np.log10([p.worst_error for p in points])
    slope = float(np.polyfit(x, y, 1)[0])
    assert abs(slope - (-1.0)) < 0.05


def test_query_conventions():
    assert conventional_error(0.3, 10, "amplitude-calls").n_queries == 2047
    assert conventional_error(0.3, 10, "grover-calls").n_queries == 1023


def test_validation():
    with pytest.raises(ValueError):
        conventional_error(-0.1, 3)
    with pytest.raises(ValueError):
        conventional_error(0.3, 0)
    with pytest.raises(ValueError):
        conventional_error(0.3, 3, "oracle-calls")


def test_curve_preserves_order():
    curve = conventional_curve(0.2, (3, 5, 4))
    assert [p.m for p in curve] == [3, 5, 4]
    assert all(p.grid_size == 2**p.m for p in curve)
