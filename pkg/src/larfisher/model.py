"""Logistic autoregressive models for binary time series.

A LAR(p) model gives the log-odds of ``Y_t = 1`` as a linear function of
the previous ``p`` outcomes; LARX(p) adds ``l`` exogenous covariates.

Parameter vectors are plain 1-D arrays laid out as
``(alpha_1, ..., alpha_l, beta_0, beta_1, ..., beta_p)`` where ``beta_k``
multiplies ``y_{t-k}``.  Series are 0/1 arrays of length ``T``; time index
``t`` (1-based) lives at array position ``t - 1``.  The first ``p``
observations are conditioning values and never contribute likelihood terms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

__all__ = [
    "ModelSpec",
    "expit",
    "cond_prob",
    "design_matrix",
    "log_likelihood",
    "score",
    "hessian",
    "em_fi",
]


@dataclass(frozen=True)
class ModelSpec:
    """Lag order ``p`` and exogenous dimension ``l``."""

    p: int
    l: int = 0

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 1:
            raise ValueError(f"lag order p must be an integer >= 1, got {self.p!r}")
        if int(self.l) != self.l or self.l < 0:
            raise ValueError(f"exogenous dimension l must be an integer >= 0, got {self.l!r}")

    @property
    def d(self) -> int:
        return self.l + self.p + 1

    @property
    def n_states(self) -> int:
        return 1 << self.p

    def beta_index(self, k: int) -> int:
        """Position of ``beta_k`` in the parameter vector (``k = 0`` is the intercept)."""
        if not 0 <= k <= self.p:
            raise ValueError(f"beta index {k} outside 0..{self.p}")
        return self.l + k

    def alpha_index(self, j: int) -> int:
        """Position of ``alpha_j`` (1-based, as in ``alpha_1``)."""
        if not 1 <= j <= self.l:
            raise ValueError(f"alpha index {j} outside 1..{self.l}")
        return j - 1

    def pack(self, beta, alpha=()) -> np.ndarray:
        alpha = np.asarray(alpha, dtype=float).reshape(-1)
        beta = np.asarray(beta, dtype=float).reshape(-1)
        if alpha.size != self.l or beta.size != self.p + 1:
            raise ValueError(
                f"expected {self.l} alpha and {self.p + 1} beta values, "
                f"got {alpha.size} and {beta.size}"
            )
        return np.concatenate([alpha, beta])

    def split(self, theta) -> tuple[np.ndarray, np.ndarray]:
        theta = self.check_theta(theta)
        return theta[: self.l], theta[self.l :]

    def check_theta(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.d,):
            raise ValueError(f"parameter vector must have shape ({self.d},), got {theta.shape}")
        if not np.all(np.isfinite(theta)):
            raise ValueError("parameter vector has non-finite entries")
        return theta

    def label(self, i: int) -> str:
        return f"alpha{i + 1}" if i < self.l else f"beta{i - self.l}"

    @property
    def labels(self) -> list[str]:
        return [self.label(i) for i in range(self.d)]

    @property
    def name(self) -> str:
        return f"LARX({self.p})" if self.l else f"LAR({self.p})"


def _check_series(y, spec: ModelSpec, min_length: int | None = None) -> np.ndarray:
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("series entries must be 0 or 1")
    need = spec.p + 1 if min_length is None else min_length
    if y.size < need:
        raise ValueError(f"series length {y.size} < {need} required for p={spec.p}")
    return y.astype(float)


def _check_exog(x, spec: ModelSpec, T: int) -> np.ndarray:
    if spec.l == 0:
        if x is not None and np.size(x) != 0:
            raise ValueError("exogenous covariates supplied for a model with l = 0")
        return np.zeros((T, 0))
    if x is None:
        raise ValueError(f"model has l={spec.l} covariates but no exogenous matrix was given")
    x = np.asarray(x, dtype=float)
    if x.ndim == 1 and spec.l == 1:
        x = x[:, None]
    if x.shape != (T, spec.l):
        raise ValueError(f"exogenous matrix must have shape ({T}, {spec.l}), got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("exogenous matrix has non-finite entries")
    return x


def cond_prob(theta, lag, xrow=(), spec: ModelSpec | None = None) -> float:
    """``P(Y_t = 1 | lag, x_t)`` with ``lag = (y_{t-1}, ..., y_{t-p})``."""
    lag = np.asarray(lag, dtype=float).reshape(-1)
    xrow = np.asarray(xrow, dtype=float).reshape(-1)
    if spec is None:
        spec = ModelSpec(p=lag.size, l=xrow.size) if lag.size else None
        if spec is None:
            raise ValueError("lag vector must have length p >= 1")
    theta = spec.check_theta(theta)
    if lag.size != spec.p:
        raise ValueError(f"lag vector must have length {spec.p}, got {lag.size}")
    if xrow.size != spec.l:
        raise ValueError(f"covariate row must have length {spec.l}, got {xrow.size}")
    z = np.concatenate([xrow, [1.0], lag])
    return float(expit(z @ theta))


def design_matrix(y, x, spec: ModelSpec) -> tuple[np.ndarray, np.ndarray]:
    """Regressor rows ``z_t = (x_t, 1, y_{t-1}, ..., y_{t-p})`` and responses for t = p+1..T."""
    y = _check_series(y, spec)
    T = y.size
    x = _check_exog(x, spec, T)
    n = T - spec.p
    Z = np.empty((n, spec.d))
    Z[:, : spec.l] = x[spec.p :]
    Z[:, spec.l] = 1.0
    for k in range(1, spec.p + 1):
        Z[:, spec.l + k] = y[spec.p - k : T - k]
    return Z, y[spec.p :]


def _loglik_terms(Z, r, theta) -> float:
    eta = Z @ theta
    return float(np.sum(r * eta - np.logaddexp(0.0, eta)))


def log_likelihood(theta, y, x=None, spec: ModelSpec | None = None) -> float:
    spec = spec or ModelSpec(p=1)
    theta = spec.check_theta(theta)
    Z, r = design_matrix(y, x, spec)
    return _loglik_terms(Z, r, theta)


def score(theta, y, x=None, spec: ModelSpec | None = None) -> np.ndarray:
    """Gradient of :func:`log_likelihood`: ``sum_t z_t (y_t - P_t)``."""
    spec = spec or ModelSpec(p=1)
    theta = spec.check_theta(theta)
    Z, r = design_matrix(y, x, spec)
    return Z.T @ (r - expit(Z @ theta))


def hessian(theta, y, x=None, spec: ModelSpec | None = None) -> np.ndarray:
    """Negated Hessian ``sum_t P_t (1 - P_t) z_t z_t'`` of the log-likelihood."""
    spec = spec or ModelSpec(p=1)
    theta = spec.check_theta(theta)
    Z, _ = design_matrix(y, x, spec)
    P = expit(Z @ theta)
    H = (Z * (P * (1.0 - P))[:, None]).T @ Z
    return (H + H.T) / 2.0


def em_fi(theta, y, x=None, spec: ModelSpec | None = None) -> np.ndarray:
    """Empirical Fisher information: the negated Hessian at ``theta`` on the observed data.

    Pass the MLE for the usual plug-in estimate, or the true parameter in
    simulation work.
    """
    return hessian(theta, y, x, spec)
