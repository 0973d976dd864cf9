import numpy as np
import pytest

from larfisher.exact import qt_forward
from larfisher.model import ModelSpec
from larfisher.montecarlo import (
    InitialPolicy,
    ScenarioConfig,
    ci_length_study,
    frobenius_study,
    make_rng,
    run_scenario,
    simulate_series,
)


def test_rng_streams_are_reproducible_and_distinct():
    a = make_rng(5, 0, 1).random(4)
    np.testing.assert_array_equal(a, make_rng(5, 0, 1).random(4))
    assert not np.allclose(a, make_rng(5, 0, 2).random(4))
    assert not np.allclose(a, make_rng(6, 0, 1).random(4))


def test_fixed_initial_policy_order():
    # fixed states list (y_p, ..., y_1)
    y, _ = simulate_series([0, 0, 0, 0], ModelSpec(3), 5, make_rng(0), InitialPolicy.fixed((1, 0, 0)))
    np.testing.assert_array_equal(y[:3], [0, 0, 1])


def test_simulation_frequencies_match_exact_marginals():
    spec = ModelSpec(2)
    theta = [-0.3, 1.1, -0.7]
    T, n = 8, 20000
    ys = np.array([simulate_series(theta, spec, T, make_rng(3, k), InitialPolicy.fixed((1, 0)))[0]
                   for k in range(n)])
    # state (y_{t-1}, y_{t-2}) at t = T+1 is (y_T, y_{T-1}); code bit 0 is y_T
    codes = ys[:, -1] + 2 * ys[:, -2]
    freq = np.bincount(codes, minlength=4) / n
    exact = qt_forward(theta, spec, (1, 0), T + 1)[-1]
    np.testing.assert_allclose(freq, exact, atol=4 * np.sqrt(0.25 / n))


def test_covariates_drawn_for_larx():
    y, x = simulate_series([0.5, 0.1, 0.5], ModelSpec(1, 1), 30, make_rng(1))
    assert x.shape == (30, 1) and y.shape == (30,)
    with pytest.raises(ValueError):
        simulate_series([0.1, 0.5], ModelSpec(1), 30, make_rng(1), exog_policy="iid_standard_normal")


def test_scenario_deterministic_and_worker_independent():
    cfg = ScenarioConfig(ModelSpec(1), (0.1, 0.5), 40, 12, seed=8)
    a = run_scenario(cfg, workers=1)
    b = run_scenario(cfg, workers=2)
    assert a.rows() == b.rows()


def test_replicate_independent_of_count():
    # replicate k uses its own stream, so a longer run extends a shorter one
    small = ScenarioConfig(ModelSpec(1), (0.1, 0.5), 30, 5, seed=2)
    big = ScenarioConfig(ModelSpec(1), (0.1, 0.5), 30, 10, seed=2)
    from larfisher.montecarlo import _scenario_replicate

    for k in range(5):
        a, b = _scenario_replicate(small, k), _scenario_replicate(big, k)
        np.testing.assert_array_equal(a["estimate"], b["estimate"])


def test_summary_shape():
    cfg = ScenarioConfig(ModelSpec(2), (0.1, 0.3, 0.5), 60, 20, seed=1, tested=(1, 2))
    s = run_scenario(cfg)
    assert s.labels == ["beta1", "beta2"]
    rows = s.rows()
    assert len(rows) == 4
    for r in rows:
        assert 0 <= r["type1_rate"] <= 1
        assert r["avg_se_at_mle"] > 0 and r["se_at_truth"] > 0 and r["observed_sd"] > 0


def test_null_theta_zeroes_tested_coordinate():
    cfg = ScenarioConfig(ModelSpec(1, 1), (0.5, 0.1, 0.5), 20, 1, tested=(0, 2))
    np.testing.assert_array_equal(cfg.null_theta(0), [0.0, 0.1, 0.5])
    np.testing.assert_array_equal(cfg.null_theta(2), [0.5, 0.1, 0.0])


def test_scenario_validation():
    with pytest.raises(ValueError):
        ScenarioConfig(ModelSpec(1), (0.1,), 20, 5)
    with pytest.raises(ValueError):
        ScenarioConfig(ModelSpec(1), (0.1, 0.5), 20, 0)


def test_ci_length_study_rows():
    base = ScenarioConfig(ModelSpec(1), (0.1, 0.5), 50, 8, seed=3)
    rows = ci_length_study(base, [0.5, 1.0], over="beta1")
    assert [r["beta1"] for r in rows] == [0.5, 1.0]
    assert all(r["n_used"] + r["n_singular"] == 8 for r in rows)


def test_frobenius_study_decreases_over_long_grid():
    base = ScenarioConfig(ModelSpec(1), (0.1, 0.5), 400, 20, seed=4)
    rows = frobenius_study(base, [50, 400], mode="inverse_fi")
    assert rows[1]["mean_frobenius"] < rows[0]["mean_frobenius"]
    fi_rows = frobenius_study(base, [50], mode="fi")
    assert fi_rows[0]["mean_frobenius"] > 0
