import numpy as np
import pytest

from larfisher.estimation import (
    CONVERGED,
    DIVERGED,
    FitConfig,
    Subject,
    SubjectPanel,
    fit_mle,
    is_separated,
)
from larfisher.exact import ex_fi_forward, initial_state
from larfisher.model import ModelSpec, design_matrix, em_fi, score
from larfisher.montecarlo import make_rng, simulate_series


def simulated_panel(spec, theta, T, n, seed=0):
    ys, xs = [], []
    for k in range(n):
        y, x = simulate_series(theta, spec, T, make_rng(seed, k))
        ys.append(y)
        xs.append(x)
    return SubjectPanel.from_series(ys, spec, xs if spec.l else None)


def test_fit_recovers_parameters():
    spec = ModelSpec(2, 1)
    theta = np.array([0.8, -0.3, 1.2, -0.6])
    fit = fit_mle(simulated_panel(spec, theta, 400, 10, seed=1))
    assert fit.status == CONVERGED and fit.converged
    assert np.max(np.abs(fit.score)) < 1e-8
    se = np.sqrt(np.diag(np.linalg.inv(fit.ex_fi)))
    assert np.all(np.abs(fit.theta_hat - theta) < 4 * se)


def test_fit_information_matches_definitions():
    spec = ModelSpec(1)
    panel = simulated_panel(spec, [0.1, 0.5], 60, 3, seed=2)
    fit = fit_mle(panel)
    em = sum(em_fi(fit.theta_hat, s.y, None, spec) for s in panel.subjects)
    ex = sum(ex_fi_forward(fit.theta_hat, spec, initial_state(s.y, 1), s.y.size) for s in panel.subjects)
    np.testing.assert_allclose(fit.em_fi, em, rtol=1e-12)
    np.testing.assert_allclose(fit.ex_fi, ex, rtol=1e-12)
    np.testing.assert_array_equal(fit.fi("exact"), fit.ex_fi)
    with pytest.raises(ValueError):
        fit.fi("observed")


def test_counts():
    panel = SubjectPanel.from_series([np.array([0, 1, 1, 0]), np.array([1, 0, 1, 1, 1])], ModelSpec(2))
    assert panel.n_effective == 2 + 3
    assert panel.n_observations == 9
    assert len(panel) == 2


def test_all_ones_is_separated():
    fit = fit_mle(SubjectPanel.from_series([np.ones(20, dtype=int)], ModelSpec(1)))
    assert fit.status == DIVERGED
    assert not fit.converged


def test_alternating_series_is_separated():
    y = np.tile([0, 1], 15)
    fit = fit_mle(SubjectPanel.from_series([y], ModelSpec(1)))
    assert fit.status == DIVERGED


def test_quasi_separation_detected():
    # every 0 is followed by a 1, but 1s are followed by both values
    y = np.array([0, 1, 1, 0, 1, 1, 1, 0, 1, 0, 1, 1, 0, 1, 1, 1, 1, 0, 1])
    Z, r = design_matrix(y, None, ModelSpec(1))
    assert is_separated(Z, r)
    assert fit_mle(SubjectPanel.from_series([y], ModelSpec(1))).status == DIVERGED


def test_overlapping_data_not_separated():
    rng = np.random.default_rng(0)
    Z = np.column_stack([np.ones(50), rng.integers(0, 2, 50)])
    r = np.r_[np.zeros(25), np.ones(25)]
    Z[:4, 1], r[:4] = [0, 0, 1, 1], [0, 1, 0, 1]
    assert not is_separated(Z, r)


def test_duplicating_subjects_keeps_estimate_and_doubles_information():
    spec = ModelSpec(2)
    panel = simulated_panel(spec, [0.2, 0.7, -0.4], 80, 4, seed=3)
    doubled = SubjectPanel(panel.subjects + [Subject(f"{s.id}b", s.y, s.x) for s in panel.subjects], spec)
    a, b = fit_mle(panel), fit_mle(doubled)
    np.testing.assert_allclose(b.theta_hat, a.theta_hat, atol=1e-10)
    np.testing.assert_allclose(b.em_fi, 2 * a.em_fi, rtol=1e-10)
    np.testing.assert_allclose(b.ex_fi, 2 * a.ex_fi, rtol=1e-10)


def test_subject_order_does_not_matter():
    spec = ModelSpec(1, 1)
    panel = simulated_panel(spec, [0.5, 0.1, 0.5], 50, 5, seed=4)
    shuffled = SubjectPanel(panel.subjects[::-1], spec)
    a, b = fit_mle(panel), fit_mle(shuffled)
    np.testing.assert_array_equal(a.theta_hat, b.theta_hat)
    np.testing.assert_array_equal(a.ex_fi, b.ex_fi)


def test_fit_is_deterministic():
    spec = ModelSpec(3)
    panel = simulated_panel(spec, [0.0, 0.5, 0.5, -0.5], 100, 2, seed=5)
    a, b = fit_mle(panel), fit_mle(panel)
    np.testing.assert_array_equal(a.theta_hat, b.theta_hat)
    assert a.iterations == b.iterations


def test_single_subject_score_zero_at_mle():
    spec = ModelSpec(1)
    y, _ = simulate_series([0.1, 0.5], spec, 200, make_rng(9, 0))
    fit = fit_mle(SubjectPanel.from_series([y], spec))
    assert np.max(np.abs(score(fit.theta_hat, y, None, spec))) < 1e-8


def test_max_iter_status():
    spec = ModelSpec(1)
    y, _ = simulate_series([0.1, 0.5], spec, 200, make_rng(9, 0))
    fit = fit_mle(SubjectPanel.from_series([y], spec), FitConfig(max_iter=1))
    assert fit.status == "max_iter"
    assert fit.iterations == 1


def test_short_subject_rejected():
    with pytest.raises(ValueError):
        SubjectPanel.from_series([np.array([1, 0])], ModelSpec(1))


def test_duplicate_subject_ids_rejected():
    y = np.array([0, 1, 1, 0])
    with pytest.raises(ValueError):
        SubjectPanel([Subject("a", y), Subject("a", y)], ModelSpec(1))


@pytest.mark.parametrize("kw", [dict(max_iter=0), dict(grad_tol=0.0), dict(divergence_norm=-1.0)])
def test_fit_config_validation(kw):
    with pytest.raises(ValueError):
        FitConfig(**kw)
