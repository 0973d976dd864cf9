import numpy as np
import pytest
from scipy.special import expit

from larfisher.estimation import SubjectPanel, fit_mle
from larfisher.inference import (
    Z_95,
    Functional,
    SingularInformationError,
    functional_ci,
    inverse_fi,
    order_selection,
    standard_errors,
    wald_ci,
    wald_test,
    z_quantile,
)
from larfisher.model import ModelSpec
from larfisher.montecarlo import make_rng, simulate_series


def test_z_quantiles():
    assert z_quantile(0.95) == Z_95
    assert z_quantile(0.90) == pytest.approx(1.6448536269514722, rel=1e-12)
    with pytest.raises(ValueError):
        z_quantile(1.0)


def test_wald_ci_by_hand():
    fi = np.array([[4.0, 0.0], [0.0, 25.0]])
    ci = wald_ci([1.0, 0.3], fi, 1)
    assert ci.se == pytest.approx(0.2)
    assert ci.lower == pytest.approx(0.3 - Z_95 * 0.2, abs=1e-15)
    assert ci.upper == pytest.approx(0.3 + Z_95 * 0.2, abs=1e-15)
    assert ci.length == pytest.approx(2 * Z_95 * 0.2)


def test_functional_transforms_map_endpoints():
    fi = np.array([[10.0, 2.0], [2.0, 5.0]])
    theta = np.array([0.2, -0.4])
    base = functional_ci(theta, fi, Functional((1.0, 1.0)))
    prob = functional_ci(theta, fi, Functional((1.0, 1.0), "expit"))
    odds = functional_ci(theta, fi, Functional((1.0, 1.0), "exp"))
    assert prob.point == pytest.approx(expit(-0.2))
    assert (prob.lower, prob.upper) == pytest.approx((expit(base.lower), expit(base.upper)))
    assert (odds.lower, odds.upper) == pytest.approx((np.exp(base.lower), np.exp(base.upper)))
    assert 0 < prob.lower < prob.point < prob.upper < 1


def test_wider_level_gives_wider_interval():
    fi = np.array([[3.0, 1.0], [1.0, 2.0]])
    widths = [wald_ci([0.1, 0.2], fi, 0, level).length for level in (0.8, 0.9, 0.95, 0.99)]
    assert all(b > a for a, b in zip(widths, widths[1:]))


def test_more_information_gives_narrower_interval():
    fi = np.array([[3.0, 1.0], [1.0, 2.0]])
    assert wald_ci([0, 0], 2 * fi, 1).length < wald_ci([0, 0], fi, 1).length


def test_test_agrees_with_interval():
    rng = np.random.default_rng(11)
    for _ in range(200):
        A = rng.normal(size=(3, 3))
        fi = A @ A.T + 0.1 * np.eye(3)
        theta = rng.normal(size=3)
        j = int(rng.integers(0, 3))
        z, reject = wald_test(theta, fi, j)
        ci = wald_ci(theta, fi, j)
        assert reject == (ci.lower > 0 or ci.upper < 0)
        assert z == pytest.approx(theta[j] / standard_errors(fi)[j])


def test_singular_information():
    with pytest.raises(SingularInformationError):
        inverse_fi(np.array([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(SingularInformationError):
        wald_ci([0, 0], np.array([[1.0, np.nan], [np.nan, 1.0]]), 0)


def test_inverse_fi_matches_numpy():
    fi = np.array([[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]])
    np.testing.assert_allclose(inverse_fi(fi), np.linalg.inv(fi), rtol=1e-13)


def test_conditional_functional_layout():
    spec = ModelSpec(2, 1)
    f = Functional.conditional(spec, lags=[1, 0], x=[3.0], transform="exp")
    assert f.c == (3.0, 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        Functional.conditional(spec, lags=[1], x=[3.0])


def test_coordinate_bounds():
    with pytest.raises(ValueError):
        wald_ci([0.0, 0.0], np.eye(2), 2)


def test_order_selection_picks_true_order():
    spec = ModelSpec(2)
    ys = [simulate_series([-0.5, 0.2, 1.5], spec, 300, make_rng(21, k))[0] for k in range(3)]
    panel = SubjectPanel.from_series(ys, ModelSpec(1))
    rows = order_selection(panel, [1, 2, 3])
    assert [r.p for r in rows] == [1, 2, 3]
    best_bic = [r.p for r in rows if r.best_bic]
    assert best_bic == [2]
    assert sum(r.best_aic for r in rows) == 1
    n = panel.n_observations
    for r in rows:
        fit = fit_mle(panel.with_spec(ModelSpec(r.p)))
        assert r.aic == pytest.approx(-2 * fit.loglik + 2 * r.p)
        assert r.bic == pytest.approx(-2 * fit.loglik + r.p * np.log(n))


def test_order_selection_flags_diverged():
    panel = SubjectPanel.from_series([np.ones(15, dtype=int)], ModelSpec(1))
    rows = order_selection(panel, [1])
    assert rows[0].status == "diverged_separation"
    assert np.isnan(rows[0].aic) and not rows[0].best_aic
