"""Exact conditional Fisher information for LAR(p)/LARX(p).

The information conditional on the first ``p`` observations is the expected
negated Hessian, a sum over times ``t = p+1..T`` and over the ``2**p``
possible lag configurations weighted by their conditional probabilities.

Four routes are provided:

* :func:`ex_fi_forward` propagates the lag-state distribution forward in
  time (production path, ``O(T * 2**p)``).
* :func:`ex_fi_functional_iteration` evaluates each time's expected
  contribution by backward iterated expectations (verification path,
  ``O(T**2 * 2**p)``).
* :func:`ex_fi_lar1_closed_form` is the analytic LAR(1) result.
* :func:`ex_fi_bruteforce` enumerates every sample path (the oracle).

Lag states are integers: bit ``k`` holds ``y_{t-1-k}``.  Exogenous
matrices are indexed like the series (row ``t - 1`` is ``x_t``) and are
treated as known for the whole horizon.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .model import ModelSpec, _check_exog

__all__ = [
    "MAX_ENUMERATION",
    "MAX_LAG",
    "EnumerationSizeError",
    "Lar1Kernel",
    "encode_state",
    "decode_state",
    "initial_state",
    "state_matrix",
    "qt_forward",
    "ex_fi_forward",
    "ex_fi_functional_iteration",
    "ex_fi_lar1_closed_form",
    "ex_fi_bruteforce",
    "path_probability_total",
]

MAX_ENUMERATION = 24
MAX_LAG = 20


class EnumerationSizeError(ValueError):
    """Raised when brute-force enumeration would exceed ``2**MAX_ENUMERATION`` paths."""


def encode_state(bits) -> int:
    """Encode ``(y_{t-1}, ..., y_{t-p})`` as an integer."""
    code = 0
    for k, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"lag values must be 0 or 1, got {b!r}")
        code |= int(b) << k
    return code


def decode_state(code: int, p: int) -> tuple[int, ...]:
    if not 0 <= code < (1 << p):
        raise ValueError(f"state code {code} outside [0, {1 << p})")
    return tuple((code >> k) & 1 for k in range(p))


def initial_state(y, p: int) -> int:
    """State at time ``p+1`` from an observed series (uses ``y_p, ..., y_1``)."""
    y = np.asarray(y)
    if y.size < p:
        raise ValueError(f"need at least {p} observations for the initial block")
    return encode_state(int(y[p - 1 - k]) for k in range(p))


def state_matrix(p: int) -> np.ndarray:
    """``(2**p, p)`` array whose row ``s`` is the decoded lag vector of state ``s``."""
    codes = np.arange(1 << p)
    return ((codes[:, None] >> np.arange(p)[None, :]) & 1).astype(float)


@dataclass(frozen=True)
class Lar1Kernel:
    """Transition probabilities and Bernoulli variances of a LAR(1) chain.

    ``p0 = P(Y_t=1 | Y_{t-1}=0)`` and ``p1 = P(Y_t=1 | Y_{t-1}=1)`` are rows of
    a transition kernel, so ``p0 + p1`` is unconstrained.
    """

    p0: float
    p1: float

    @classmethod
    def from_beta(cls, beta) -> "Lar1Kernel":
        b0, b1 = (float(b) for b in beta)
        return cls(p0=float(expit(b0)), p1=float(expit(b0 + b1)))

    @property
    def v0(self) -> float:
        return self.p0 * (1.0 - self.p0)

    @property
    def v1(self) -> float:
        return self.p1 * (1.0 - self.p1)

    def prob(self, y: int) -> float:
        return self.p1 if y else self.p0

    def var(self, y: int) -> float:
        return self.v1 if y else self.v0


def _prepare(theta, spec: ModelSpec, initial, T: int, exog):
    if spec.p > MAX_LAG:
        raise ValueError(f"lag order p={spec.p} exceeds the supported maximum {MAX_LAG}")
    theta = spec.check_theta(theta)
    if int(T) != T or T < spec.p + 1:
        raise ValueError(f"T={T} must be an integer >= p+1 = {spec.p + 1}")
    if isinstance(initial, (int, np.integer)):
        s0 = int(initial)
        decode_state(s0, spec.p)
    else:
        s0 = encode_state(initial)
        if len(tuple(initial)) != spec.p:
            raise ValueError(f"initial state must have {spec.p} lag values")
    x = _check_exog(exog, spec, int(T))
    return theta, s0, x


class _Kernel:
    """Per-state regressors, success probabilities and variances at each time."""

    def __init__(self, theta, spec: ModelSpec, x: np.ndarray):
        self.spec = spec
        self.theta = theta
        self.x = x
        alpha, beta = theta[: spec.l], theta[spec.l :]
        self.lags = state_matrix(spec.p)
        self.state_eta = beta[0] + self.lags @ beta[1:]
        self.x_eta = x @ alpha if spec.l else np.zeros(x.shape[0])

    def prob(self, t: int) -> np.ndarray:
        """``P(Y_t = 1 | state)`` for every state; ``t`` is 1-based."""
        return expit(self.state_eta + self.x_eta[t - 1])

    def regressors(self, t: int) -> np.ndarray:
        n = self.lags.shape[0]
        Z = np.empty((n, self.spec.d))
        Z[:, : self.spec.l] = self.x[t - 1]
        Z[:, self.spec.l] = 1.0
        Z[:, self.spec.l + 1 :] = self.lags
        return Z


def _step(q: np.ndarray, P1: np.ndarray, p: int) -> np.ndarray:
    # shifting in y_t: new code = ((s << 1) | y_t) & mask
    n = q.size
    shifted = (np.arange(n) << 1) & (n - 1)
    out = np.bincount(shifted, weights=q * (1.0 - P1), minlength=n)
    out += np.bincount(shifted | 1, weights=q * P1, minlength=n)
    return out


def qt_forward(theta, spec: ModelSpec, initial, T: int, exog=None) -> np.ndarray:
    """Lag-state distributions ``Q_t`` for ``t = p+1..T``.

    Returns an array of shape ``(T - p, 2**p)``; row ``i`` is ``Q_{p+1+i}``.
    """
    theta, s0, x = _prepare(theta, spec, initial, T, exog)
    kern = _Kernel(theta, spec, x)
    p = spec.p
    Q = np.zeros((T - p, 1 << p))
    Q[0, s0] = 1.0
    for i in range(1, T - p):
        t = p + 1 + i
        Q[i] = _step(Q[i - 1], kern.prob(t - 1), p)
    return Q


def _weighted_outer(Z: np.ndarray, w: np.ndarray) -> np.ndarray:
    return (Z * w[:, None]).T @ Z


def _symmetrize(M: np.ndarray) -> np.ndarray:
    return (M + M.T) / 2.0


def ex_fi_forward(theta, spec: ModelSpec, initial, T: int, exog=None) -> np.ndarray:
    """Exact conditional Fisher information via the forward ``Q_t`` recursion."""
    theta, s0, x = _prepare(theta, spec, initial, T, exog)
    kern = _Kernel(theta, spec, x)
    p = spec.p
    q = np.zeros(1 << p)
    q[s0] = 1.0
    if spec.l == 0:
        # time-invariant regressors: accumulate state weights, one outer product
        P = kern.prob(p + 1)
        v = P * (1.0 - P)
        w = np.zeros_like(q)
        for t in range(p + 1, T + 1):
            if t > p + 1:
                q = _step(q, P, p)
            w += v * q
        return _symmetrize(_weighted_outer(kern.regressors(p + 1), w))
    info = np.zeros((spec.d, spec.d))
    for t in range(p + 1, T + 1):
        if t > p + 1:
            q = _step(q, kern.prob(t - 1), p)
        P = kern.prob(t)
        info += _weighted_outer(kern.regressors(t), P * (1.0 - P) * q)
    return _symmetrize(info)


def ex_fi_functional_iteration(theta, spec: ModelSpec, initial, T: int, exog=None) -> np.ndarray:
    """Exact information as a sum of per-time expectations by backward iteration.

    For each ``t0`` the integrand ``v z z'`` over the states at ``t0`` is
    pulled back one step at a time, ``f_k(s) = f_{k-1}(s0) + (f_{k-1}(s1) -
    f_{k-1}(s0)) P(1 | s)``, until it reaches time ``p+1`` where it is read
    off at the initial state.
    """
    theta, s0, x = _prepare(theta, spec, initial, T, exog)
    kern = _Kernel(theta, spec, x)
    p, d = spec.p, spec.d
    n = 1 << p
    codes = np.arange(n)
    shift0 = (codes << 1) & (n - 1)
    shift1 = shift0 | 1
    info = np.zeros((d, d))
    for t0 in range(p + 1, T + 1):
        Z = kern.regressors(t0)
        P = kern.prob(t0)
        f = (P * (1.0 - P))[:, None, None] * Z[:, :, None] * Z[:, None, :]
        for tau in range(t0 - 1, p, -1):
            P_tau = kern.prob(tau)[:, None, None]
            f0, f1 = f[shift0], f[shift1]
            f = f0 + (f1 - f0) * P_tau
        info += f[s0]
    return _symmetrize(info)


def ex_fi_lar1_closed_form(beta, T: int, y1: int) -> np.ndarray:
    """Analytic exact information for LAR(1) without covariates.

    ``beta = (beta_0, beta_1)``; the result is conditional on ``Y_1 = y1``.
    """
    beta = np.asarray(beta, dtype=float).reshape(-1)
    if beta.size != 2:
        raise ValueError("closed form applies to LAR(1) with no covariates: beta must be (beta0, beta1)")
    if not np.all(np.isfinite(beta)):
        raise ValueError("parameter vector has non-finite entries")
    if int(T) != T or T < 2:
        raise ValueError(f"T={T} must be an integer >= 2")
    if y1 not in (0, 1):
        raise ValueError("y1 must be 0 or 1")
    k = Lar1Kernel.from_beta(beta)
    p0, p1, v0, v1 = k.p0, k.p1, k.v0, k.v1
    denom = 1.0 - p1 + p0
    lead = k.prob(y1) - p0 / denom
    geom = (1.0 - (p1 - p0) ** (T - 2)) / denom
    i11 = (v1 - v0) * lead * geom + (T - 2) * (p0 * v1 + v0 - v0 * p1) / denom + k.var(y1)
    i12 = v1 * lead * geom + (T - 2) * p0 * v1 / denom + k.var(y1) * y1
    return np.array([[i11, i12], [i12, i12]])


def _enumeration_chunks(n: int, chunk: int = 1 << 14):
    """Yield consecutive blocks of the ``2**n`` binary paths as ``(m, n)`` arrays."""
    total = 1 << n
    shifts = np.arange(n)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        yield ((idx[:, None] >> shifts[None, :]) & 1).astype(float)


def _bruteforce(theta, spec: ModelSpec, initial, T: int, exog):
    theta, s0, x = _prepare(theta, spec, initial, T, exog)
    p, l, d = spec.p, spec.l, spec.d
    n = T - p
    if n > MAX_ENUMERATION:
        raise EnumerationSizeError(
            f"brute force needs 2**{n} paths; T - p must be <= {MAX_ENUMERATION}"
        )
    alpha, beta = theta[:l], theta[l:]
    head = np.array(decode_state(s0, p)[::-1], dtype=float)  # (y_1, ..., y_p)
    x_eta = x[p:] @ alpha if l else np.zeros(n)
    info = np.zeros((d, d))
    total = 0.0
    for paths in _enumeration_chunks(n):
        m = paths.shape[0]
        y = np.concatenate([np.broadcast_to(head, (m, p)), paths], axis=1)
        lags = np.stack([y[:, p - k : p - k + n] for k in range(1, p + 1)], axis=2)
        eta = beta[0] + lags @ beta[1:] + x_eta[None, :]
        P = expit(eta)
        prob = np.prod(np.where(paths == 1.0, P, 1.0 - P), axis=1)
        total += prob.sum()
        w = prob[:, None] * P * (1.0 - P)  # (m, n)
        Z = np.empty((m, n, d))
        Z[:, :, :l] = x[p:][None, :, :]
        Z[:, :, l] = 1.0
        Z[:, :, l + 1 :] = lags
        info += np.einsum("mt,mti,mtj->ij", w, Z, Z)
    return _symmetrize(info), total


def ex_fi_bruteforce(theta, spec: ModelSpec, initial, T: int, exog=None) -> np.ndarray:
    """Exact information by enumerating all ``2**(T-p)`` continuations of the initial block."""
    return _bruteforce(theta, spec, initial, T, exog)[0]


def path_probability_total(theta, spec: ModelSpec, initial, T: int, exog=None) -> float:
    """Sum of the enumerated path probabilities (1 up to rounding)."""
    return _bruteforce(theta, spec, initial, T, exog)[1]
