import math

import pytest

import etcsim


def make(n, scenario, scheme, horizon=200.0, trials=2):
    c = etcsim.ScenarioConfig()
    c.n = n
    c.scenario = scenario
    c.scheme = scheme
    c.horizon = horizon
    c.trials = trials
    return c


def test_closed_forms():
    assert etcsim.j_tt_b(3, 1.5) == pytest.approx(4.5)
    assert etcsim.j_et_b(3, math.sqrt(1.5)) == pytest.approx(1.5)
    assert etcsim.j_tt_bl(3, 0.5) == pytest.approx(1.5)
    assert etcsim.tt_information_gap(10) == 10
    assert etcsim.expected_occupation_integral(1.0) == pytest.approx(1 / 6)


def test_consensus_cost():
    assert etcsim.consensus_cost([1.0, 2.0, 3.0]) == pytest.approx(6.0)
    assert etcsim.consensus_cost([4.0, 4.0]) == 0.0


def test_periodic_batch_near_closed_form():
    c = make(3, etcsim.InfoScenario.BroadcastPlusLocal, etcsim.PeriodicSync(0.5), horizon=500.0)
    r = etcsim.run_batch(c)
    assert r.trials == 2
    assert len(r.per_trial_j) == 2
    assert r.j_time_avg == pytest.approx(1.5, rel=0.08)
    assert r.mean_global_interevent == pytest.approx(0.5, rel=1e-6)


def test_batch_is_deterministic():
    c = make(3, etcsim.InfoScenario.BroadcastOnly, etcsim.LevelBroadcast(1.0))
    assert etcsim.run_batch(c).j_time_avg == etcsim.run_batch(c).j_time_avg


def test_scheme_mismatch_raises():
    c = make(3, etcsim.InfoScenario.BroadcastOnly, etcsim.LevelGlobal(1.0))
    with pytest.raises(ValueError):
        etcsim.run_batch(c)


def test_trajectory_columns():
    c = make(2, etcsim.InfoScenario.BroadcastOnly, etcsim.LevelBroadcast(0.5), horizon=2.0, trials=1)
    c.trajectory_stride = 10
    header, rows = etcsim.trajectory(c)
    assert header[:5] == ["t", "x_1", "x_2", "xhat_1", "xhat_2"]
    assert all(len(row) == len(header) for row in rows)


def test_exit_time_and_calibration():
    mean, ci = etcsim.mean_first_passage(1, 1.0, dt=2e-3, samples=4000)
    assert abs(mean - 1.0) < 0.06
    cal = etcsim.calibrate_delta_bl(3, 0.5, samples=10000)
    assert cal["delta"] == pytest.approx(1.04, rel=0.1)
