"""Randomized invariants checked with hypothesis."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from larfisher.exact import (
    ex_fi_bruteforce,
    ex_fi_forward,
    ex_fi_functional_iteration,
    qt_forward,
)
from larfisher.inference import functional_ci, Functional, wald_ci, wald_test
from larfisher.model import ModelSpec, em_fi, log_likelihood, score

coef = st.floats(-4, 4, allow_nan=False)


@st.composite
def configs(draw, max_T=9):
    p = draw(st.integers(1, 3))
    l = draw(st.integers(0, 2))
    spec = ModelSpec(p, l)
    T = draw(st.integers(p + 1, max_T))
    theta = np.array(draw(st.lists(coef, min_size=spec.d, max_size=spec.d)))
    s0 = draw(st.integers(0, (1 << p) - 1))
    seed = draw(st.integers(0, 2**32 - 1))
    x = np.random.default_rng(seed).standard_normal((T, l)) if l else None
    return spec, theta, T, s0, x


@settings(max_examples=60, deadline=None)
@given(configs())
def test_forward_matches_enumeration(cfg):
    spec, theta, T, s0, x = cfg
    ref = ex_fi_bruteforce(theta, spec, s0, T, x)
    np.testing.assert_allclose(ex_fi_forward(theta, spec, s0, T, x), ref, atol=1e-10)
    np.testing.assert_allclose(ex_fi_functional_iteration(theta, spec, s0, T, x), ref, atol=1e-10)


@settings(max_examples=60, deadline=None)
@given(configs(max_T=40))
def test_qt_is_a_distribution(cfg):
    spec, theta, T, s0, x = cfg
    Q = qt_forward(theta, spec, s0, T, x)
    assert Q.min() >= 0
    np.testing.assert_allclose(Q.sum(axis=1), 1.0, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(configs(max_T=40))
def test_exact_information_psd(cfg):
    spec, theta, T, s0, x = cfg
    m = ex_fi_forward(theta, spec, s0, T, x)
    np.testing.assert_array_equal(m, m.T)
    assert np.linalg.eigvalsh(m).min() >= -1e-12 * max(1.0, np.abs(m).max())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_em_fi_is_negative_score_jacobian(seed, p):
    rng = np.random.default_rng(seed)
    spec = ModelSpec(p)
    y = rng.integers(0, 2, 30)
    u = rng.uniform(-2, 2, spec.d)
    h = 1e-6
    J = np.array([(score(u + h * e, y, None, spec) - score(u - h * e, y, None, spec)) / (2 * h)
                  for e in np.eye(spec.d)])
    np.testing.assert_allclose(em_fi(u, y, None, spec), -J, atol=1e-6)
    assert np.isfinite(log_likelihood(u, y, None, spec))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.5, 0.999))
def test_interval_contains_point_and_matches_test(seed, level):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(3, 3))
    fi = A @ A.T + 0.05 * np.eye(3)
    theta = rng.normal(size=3)
    ci = wald_ci(theta, fi, 1, level)
    assert ci.lower <= theta[1] <= ci.upper
    if level == 0.95:
        assert wald_test(theta, fi, 1)[1] == (ci.lower > 0 or ci.upper < 0)
    prob = functional_ci(theta, fi, Functional((0.0, 1.0, 1.0), "expit"), level)
    assert 0 <= prob.lower <= prob.point <= prob.upper <= 1
