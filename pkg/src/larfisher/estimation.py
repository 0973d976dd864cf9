"""Newton-Raphson maximum likelihood for single- and multi-subject LAR/LARX fits."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.special import expit

from .exact import ex_fi_forward, initial_state
from .model import ModelSpec, _check_exog, _check_series, _loglik_terms, design_matrix

__all__ = [
    "CONVERGED",
    "DIVERGED",
    "MAX_ITER",
    "FitConfig",
    "FitResult",
    "NumericalError",
    "Subject",
    "SubjectPanel",
    "fit_mle",
    "is_separated",
]

log = logging.getLogger(__name__)

CONVERGED = "converged"
DIVERGED = "diverged_separation"
MAX_ITER = "max_iter"

# linear predictors this large only arise from a likelihood pushed toward a boundary
_SEPARATION_ETA = 15.0
# log-likelihood changes below this (relative) are summation noise
_ROUNDING = 64 * np.finfo(float).eps


class NumericalError(np.linalg.LinAlgError):
    """A linear system or information matrix could not be solved/factorized."""


@dataclass(frozen=True)
class FitConfig:
    max_iter: int = 100
    grad_tol: float = 1e-8
    step_halving_max: int = 30
    divergence_norm: float = 30.0

    def __post_init__(self):
        for name in ("max_iter", "grad_tol", "step_halving_max", "divergence_norm"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class Subject:
    id: Any
    y: np.ndarray
    x: np.ndarray | None = None


def _sort_key(subject: Subject):
    sid = subject.id
    if isinstance(sid, (int, np.integer)):
        return (0, int(sid), "")
    return (1, 0, str(sid))


@dataclass
class SubjectPanel:
    """Independent subjects sharing one :class:`ModelSpec` and parameter vector.

    Subjects are kept sorted by id so pooled sums do not depend on input order.
    Series must be gap-free; split gaps into separate subjects upstream.
    """

    subjects: list[Subject]
    spec: ModelSpec

    def __post_init__(self):
        if not self.subjects:
            raise ValueError("panel must contain at least one subject")
        ids = [s.id for s in self.subjects]
        if len(set(ids)) != len(ids):
            raise ValueError("subject ids must be unique")
        checked = []
        for s in self.subjects:
            y = _check_series(s.y, self.spec, min_length=self.spec.p + 2)
            x = _check_exog(s.x, self.spec, y.size)
            checked.append(Subject(s.id, y.astype(np.int8), x if self.spec.l else None))
        self.subjects = sorted(checked, key=_sort_key)

    @classmethod
    def from_series(cls, series: Iterable, spec: ModelSpec, exog: Sequence | None = None) -> "SubjectPanel":
        series = list(series)
        exog = [None] * len(series) if exog is None else list(exog)
        return cls([Subject(i, y, x) for i, (y, x) in enumerate(zip(series, exog))], spec)

    def __len__(self):
        return len(self.subjects)

    @property
    def n_effective(self) -> int:
        return sum(s.y.size - self.spec.p for s in self.subjects)

    @property
    def n_observations(self) -> int:
        return sum(s.y.size for s in self.subjects)

    def stacked(self) -> tuple[np.ndarray, np.ndarray]:
        parts = [design_matrix(s.y, s.x, self.spec) for s in self.subjects]
        return np.vstack([Z for Z, _ in parts]), np.concatenate([r for _, r in parts])

    def with_spec(self, spec: ModelSpec) -> "SubjectPanel":
        return SubjectPanel([Subject(s.id, s.y, s.x) for s in self.subjects], spec)


@dataclass
class FitResult:
    spec: ModelSpec
    theta_hat: np.ndarray
    loglik: float
    em_fi: np.ndarray
    ex_fi: np.ndarray
    iterations: int
    status: str
    n_effective: int
    score: np.ndarray = field(repr=False, default=None)

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    def fi(self, source: str) -> np.ndarray:
        if source == "exact":
            return self.ex_fi
        if source == "empirical":
            return self.em_fi
        raise ValueError(f"unknown information source {source!r}")


def is_separated(Z: np.ndarray, r: np.ndarray, tol: float = 1e-7) -> bool:
    """True when some direction separates (or quasi-separates) the responses.

    Solves ``max sum_t s_t z_t'd`` subject to ``s_t z_t'd >= 0`` and
    ``|d| <= 1`` with ``s_t = 2 y_t - 1``; a positive optimum means the
    likelihood keeps increasing along ``d`` and has no finite maximizer.
    """
    A = np.unique(Z * (2.0 * r - 1.0)[:, None], axis=0)
    scale = max(1.0, float(np.abs(A).max()))
    res = linprog(-A.sum(axis=0), A_ub=-A, b_ub=np.zeros(A.shape[0]), bounds=(-1, 1), method="highs")
    if res.status != 0:
        return False
    return -res.fun > tol * scale * A.shape[0]


def _newton_direction(H: np.ndarray, U: np.ndarray) -> np.ndarray:
    try:
        c = np.linalg.cholesky(H)
    except np.linalg.LinAlgError:
        ridge = 1e-8 * np.trace(H) / H.shape[0]
        try:
            c = np.linalg.cholesky(H + ridge * np.eye(H.shape[0]))
        except np.linalg.LinAlgError as exc:
            raise NumericalError("negated Hessian is singular even after ridge fallback") from exc
    return np.linalg.solve(c.T, np.linalg.solve(c, U))


def _pooled_ex_fi(theta, panel: SubjectPanel) -> np.ndarray:
    spec = panel.spec
    info = np.zeros((spec.d, spec.d))
    for s in panel.subjects:
        info += ex_fi_forward(theta, spec, initial_state(s.y, spec.p), s.y.size, s.x)
    return info


def fit_mle(panel: SubjectPanel, config: FitConfig | None = None) -> FitResult:
    """Maximize the pooled conditional log-likelihood by damped Newton steps from zero.

    Fits that run off toward infinity (``|theta| > divergence_norm``) or whose
    data admit a separating direction are flagged ``diverged_separation`` and
    returned with their last iterate.
    """
    config = config or FitConfig()
    spec = panel.spec
    Z, r = panel.stacked()

    def evaluate(theta):
        eta = Z @ theta
        P = expit(eta)
        H = (Z * (P * (1.0 - P))[:, None]).T @ Z
        return _loglik_terms(Z, r, theta), Z.T @ (r - P), (H + H.T) / 2.0

    theta = np.zeros(spec.d)
    ll, U, H = evaluate(theta)
    status = MAX_ITER
    iterations = 0
    for iterations in range(1, config.max_iter + 1):
        if np.max(np.abs(U)) < config.grad_tol:
            status = CONVERGED
            iterations -= 1
            break
        step = _newton_direction(H, U)
        scale, accepted = 1.0, False
        slack = _ROUNDING * (1.0 + abs(ll))
        for _ in range(config.step_halving_max + 1):
            cand = theta + scale * step
            ll_cand = _loglik_terms(Z, r, cand)
            if ll_cand >= ll - slack:
                accepted = True
                break
            scale /= 2.0
        if not accepted:
            log.debug("line search exhausted at iteration %d", iterations)
            break
        theta = cand
        ll, U, H = evaluate(theta)
        if np.max(np.abs(theta)) > config.divergence_norm:
            status = DIVERGED
            break
    else:
        if np.max(np.abs(U)) < config.grad_tol:
            status = CONVERGED

    if status != DIVERGED and (status != CONVERGED or np.max(np.abs(Z @ theta)) > _SEPARATION_ETA):
        if is_separated(Z, r):
            status = DIVERGED

    return FitResult(
        spec=spec,
        theta_hat=theta,
        loglik=ll,
        em_fi=H,
        ex_fi=_pooled_ex_fi(theta, panel),
        iterations=iterations,
        status=status,
        n_effective=panel.n_effective,
        score=U,
    )
