import numpy as np
import pytest

from larfisher.exact import (
    MAX_ENUMERATION,
    EnumerationSizeError,
    Lar1Kernel,
    decode_state,
    encode_state,
    ex_fi_bruteforce,
    ex_fi_forward,
    ex_fi_functional_iteration,
    ex_fi_lar1_closed_form,
    initial_state,
    path_probability_total,
    qt_forward,
    state_matrix,
)
from larfisher.model import ModelSpec

# LAR(1), beta = 0, y1 = 0: every path is equally likely and each of the
# three modelled steps contributes 1/4 * E[z z'] with z = (1, y_{t-1}).
HAND_T4 = np.array([[0.75, 0.25], [0.25, 0.25]])


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_state_round_trip(p):
    for code in range(1 << p):
        assert encode_state(decode_state(code, p)) == code


def test_initial_state_bit_order():
    # bit k holds y_{t-1-k}: with y = (y1, y2) = (1, 0) the most recent value is y2
    assert decode_state(initial_state([1, 0], 2), 2) == (0, 1)
    np.testing.assert_array_equal(state_matrix(2), [[0, 0], [1, 0], [0, 1], [1, 1]])


def test_hand_value_all_algorithms():
    spec = ModelSpec(1)
    for m in (
        ex_fi_forward([0, 0], spec, 0, 4),
        ex_fi_functional_iteration([0, 0], spec, 0, 4),
        ex_fi_lar1_closed_form([0, 0], 4, 0),
        ex_fi_bruteforce([0, 0], spec, 0, 4),
    ):
        np.testing.assert_allclose(m, HAND_T4, atol=1e-14, rtol=0)


@pytest.mark.parametrize("p,l", [(1, 0), (2, 0), (3, 0), (1, 2), (2, 1)])
def test_routes_agree(p, l):
    rng = np.random.default_rng(100 * p + l)
    spec = ModelSpec(p, l)
    for _ in range(10):
        T = int(rng.integers(p + 1, 11))
        theta = rng.uniform(-2, 2, spec.d)
        s0 = int(rng.integers(0, 1 << p))
        x = rng.standard_normal((T, l)) if l else None
        ref = ex_fi_bruteforce(theta, spec, s0, T, x)
        np.testing.assert_allclose(ex_fi_forward(theta, spec, s0, T, x), ref, atol=1e-12)
        np.testing.assert_allclose(ex_fi_functional_iteration(theta, spec, s0, T, x), ref, atol=1e-12)
        if p == 1 and l == 0:
            np.testing.assert_allclose(ex_fi_lar1_closed_form(theta, T, s0), ref, atol=1e-12)


def test_path_probabilities_sum_to_one():
    spec = ModelSpec(2, 1)
    x = np.linspace(-1, 1, 9)[:, None]
    assert path_probability_total([0.4, -0.2, 1.1, -0.8], spec, (1, 0), 9, x) == pytest.approx(1.0, abs=1e-13)


def test_qt_starts_at_initial_state_and_normalizes():
    spec = ModelSpec(3)
    Q = qt_forward([0.2, 1.0, -0.5, 0.7], spec, 5, 30)
    assert Q.shape == (27, 8)
    np.testing.assert_array_equal(Q[0], np.eye(8)[5])
    np.testing.assert_allclose(Q.sum(axis=1), 1.0, atol=1e-13)
    assert Q.min() >= 0


def test_qt_lar1_matches_two_state_chain():
    k = Lar1Kernel.from_beta([0.1, 0.5])
    P = np.array([[1 - k.p0, k.p0], [1 - k.p1, k.p1]])
    Q = qt_forward([0.1, 0.5], ModelSpec(1), 1, 12)
    dist = np.array([0.0, 1.0])
    for row in Q:
        np.testing.assert_allclose(row, dist, atol=1e-15)
        dist = dist @ P


def test_information_grows_with_T():
    spec = ModelSpec(2)
    theta = [0.3, -1.0, 0.8]
    prev = np.zeros((3, 3))
    for T in range(3, 30):
        cur = ex_fi_forward(theta, spec, 2, T)
        assert np.linalg.eigvalsh(cur - prev).min() >= -1e-12
        prev = cur


def test_lar1_i22_equals_i12():
    for y1 in (0, 1):
        m = ex_fi_forward([0.7, -2.0], ModelSpec(1), y1, 57)
        assert m[1, 1] == pytest.approx(m[0, 1], rel=1e-13)


def test_lar1_closed_form_long_series():
    # functional iteration is quadratic in T, so keep this moderate
    np.testing.assert_allclose(
        ex_fi_lar1_closed_form([0.1, 1.0], 300, 1),
        ex_fi_functional_iteration([0.1, 1.0], ModelSpec(1), 1, 300),
        rtol=1e-12,
    )


def test_covariates_enter_through_exog_rows():
    spec = ModelSpec(1, 1)
    x = np.zeros((6, 1))
    m = ex_fi_forward([2.0, 0.1, 0.5], spec, 0, 6, x)
    base = ex_fi_forward([0.1, 0.5], ModelSpec(1), 0, 6)
    np.testing.assert_allclose(m[1:, 1:], base, atol=1e-15)
    np.testing.assert_allclose(m[0], 0.0, atol=1e-15)


def test_bruteforce_size_guard():
    with pytest.raises(EnumerationSizeError):
        ex_fi_bruteforce([0, 0], ModelSpec(1), 0, MAX_ENUMERATION + 2)
    with pytest.raises(EnumerationSizeError):
        path_probability_total([0, 0, 0], ModelSpec(2), 0, MAX_ENUMERATION + 3)


def test_T_equal_p_rejected():
    with pytest.raises(ValueError):
        ex_fi_forward([0, 0, 0], ModelSpec(2), 0, 2)


def test_bad_initial_state():
    with pytest.raises(ValueError):
        ex_fi_forward([0, 0], ModelSpec(1), 2, 5)
