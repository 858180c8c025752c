import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from srglure.lti import TransferFunction, srg_lti_stable
from srglure.nonlinearity import PiecewiseLinearNl
from srglure.oracle import (
    LureLoop,
    OracleError,
    SignalBuffer,
    closed_loop_gain,
    empirical_gain,
    lti_response,
    lure_simulate,
    random_signal,
    signal_angle,
    srg_cloud,
)
from srglure.region import contains_points, disk_region

from .conftest import random_stable_tf


def test_signal_norm_and_inner():
    u = SignalBuffer(0.5, np.array([1.0, 2.0, 2.0]))
    assert u.norm() == pytest.approx(math.sqrt(0.5 * 9))
    assert u.inner(u) == pytest.approx(4.5)


@pytest.mark.parametrize("dt, x", [(0.0, [1.0]), (0.1, [np.nan])])
def test_signal_validation(dt, x):
    with pytest.raises(OracleError):
        SignalBuffer(dt, np.array(x))


def test_signal_length_mismatch():
    with pytest.raises(OracleError):
        SignalBuffer(0.1, np.ones(3)) - SignalBuffer(0.1, np.ones(4))


def test_random_signal_unit_and_reproducible():
    a = random_signal(3, 512, 0.01, 20.0)
    b = random_signal(3, 512, 0.01, 20.0)
    assert a.norm() == pytest.approx(1.0)
    assert np.array_equal(a.samples, b.samples)


def test_signal_angle_extremes():
    u = random_signal(0, 128, 0.1, 5.0)
    assert signal_angle(u, u) == pytest.approx(0.0, abs=1e-7)
    assert signal_angle(u, SignalBuffer(u.dt, -u.samples)) == pytest.approx(math.pi, abs=1e-7)
    with pytest.raises(OracleError):
        signal_angle(u, SignalBuffer(u.dt, np.zeros(128)))


# ----------------------------------------------------------------- LTI operator

def step_error(dt, T=8.0):
    n = int(round(T / dt))
    u = SignalBuffer(dt, np.ones(n))
    y = lti_response(TransferFunction([1], [1, 1]), u).samples
    t = dt * np.arange(n)
    return float(np.max(np.abs(y - (1 - np.exp(-t)))))


def test_step_response_first_order_convergence():
    # frequency-domain multiplication of a sampled step converges at rate O(dt)
    e1, e2 = step_error(0.02), step_error(0.01)
    assert e2 < 0.01
    assert 1.6 < e1 / e2 < 2.5


def test_static_gain_response():
    u = random_signal(1, 64, 0.1, 3.0)
    assert np.allclose(lti_response(TransferFunction([2], [1]), u).samples, 2 * u.samples)


def test_unstable_rejected(worked_plant):
    with pytest.raises(OracleError, match="stable operators only"):
        lti_response(worked_plant, random_signal(0, 64, 0.1, 2.0))


def test_sinusoid_steady_state():
    G = TransferFunction([1], [1, 1])
    dt, n = 0.01, 4000
    t = dt * np.arange(n)
    y = lti_response(G, SignalBuffer(dt, np.sin(2 * t))).samples
    g = G(2j)
    expected = abs(g) * np.sin(2 * t + np.angle(g))
    assert np.max(np.abs(y[2000:] - expected[2000:])) < 0.01


# -------------------------------------------------------------------- clouds

def test_cloud_of_slope_switch_in_disk(slope_switch_nl):
    cloud = srg_cloud(slope_switch_nl, 400, seed=0)
    assert len(cloud) == 400
    assert np.all(contains_points(disk_region(1, 2), cloud.points()))
    assert cloud.gain.max() <= 2 + 1e-12 and cloud.gain.min() >= 1 - 1e-12


def test_cloud_sg0_mode(slope_switch_nl):
    cloud = srg_cloud(slope_switch_nl, 100, seed=1, mode="SG0")
    assert cloud.mode == "SG0"
    # φ(x)/x lies in [1, 2], so the graph at zero stays in D[1, 2]
    assert np.all(contains_points(disk_region(1, 2), cloud.points()))
    with pytest.raises(OracleError):
        srg_cloud(slope_switch_nl, 1, 0, mode="XYZ")


def test_cloud_reproducible(pitfall_plant):
    a = srg_cloud(pitfall_plant, 20, seed=5, n=128)
    b = srg_cloud(pitfall_plant, 20, seed=5, n=128)
    assert np.array_equal(a.gain, b.gain) and np.array_equal(a.angle, b.angle)


def test_cloud_csv(tmp_path, slope_switch_nl):
    cloud = srg_cloud(slope_switch_nl, 10, seed=0)
    path = tmp_path / "cloud.csv"
    cloud.to_csv(path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["gain", "angle"] and len(rows) == 11


@settings(max_examples=5, deadline=None)
@given(seed=st.integers(0, 1000))
def test_cloud_inside_lti_srg(seed):
    G = random_stable_tf(np.random.default_rng(seed))
    srg = srg_lti_stable(G)
    cloud = srg_cloud(G, 100, seed=seed, n=128)
    assert np.all(contains_points(srg, cloud.points()))


def test_cloud_of_callable():
    cloud = srg_cloud(lambda x: np.tanh(x), 50, seed=0)
    assert np.all(cloud.gain <= 1 + 1e-12)


def test_cloud_of_lure_loop(first_order):
    loop = LureLoop(first_order, PiecewiseLinearNl.linear(1.0), tail=10.0)
    cloud = srg_cloud(loop, 20, seed=0, n=400, dt=0.01)
    assert np.all(cloud.gain <= 0.5 + 0.01)


def test_empirical_gain_first_order(first_order):
    est = empirical_gain(first_order, n_trials=50)
    assert 0.95 <= est.value <= 1.0 + 1e-9


def test_empirical_gain_mode_checked(first_order):
    with pytest.raises(OracleError):
        empirical_gain(first_order, mode="other")


# ----------------------------------------------------------------- closed loop

def test_linear_loop_step_response(first_order):
    # y = G(r - 2y) with G = 1/(s+1) is 1/(s+3)
    dt, n = 0.001, 5000
    res = lure_simulate(first_order, PiecewiseLinearNl.linear(2.0), SignalBuffer(dt, np.ones(n)))
    t = dt * np.arange(n)
    assert np.max(np.abs(res.y.samples - (1 - np.exp(-3 * t)) / 3)) < 5e-3
    assert not res.diverged
    e, y = res
    assert np.allclose(e.samples, 1 - 2 * y.samples)


def test_divergence_flagged():
    res = lure_simulate(TransferFunction([1], [-1, 1]), PiecewiseLinearNl.linear(0.0),
                        SignalBuffer(0.01, np.ones(4000)))
    assert res.diverged


def test_biproper_plant_rejected():
    with pytest.raises(OracleError, match="strictly proper"):
        lure_simulate(TransferFunction([1, 1], [1, 1]), PiecewiseLinearNl.linear(1.0),
                      SignalBuffer(0.01, np.ones(10)))


def test_closed_loop_gain_first_order(first_order):
    g = closed_loop_gain(first_order, PiecewiseLinearNl.linear(1.0), n_pairs=40)
    assert 0.4 <= g.value <= 0.5 + 0.005 and g.diverged == 0
