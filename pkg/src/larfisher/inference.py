"""Wald inference on coefficients and functionals, and AIC/BIC lag-order selection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import expit, ndtri

from .estimation import DIVERGED, FitConfig, SubjectPanel, fit_mle
from .model import ModelSpec

__all__ = [
    "Z_95",
    "SingularInformationError",
    "Functional",
    "IntervalEstimate",
    "OrderRow",
    "z_quantile",
    "inverse_fi",
    "standard_errors",
    "wald_ci",
    "wald_test",
    "functional_ci",
    "order_selection",
]

Z_95 = 1.959964

_TRANSFORMS = {"identity": lambda u: u, "expit": expit, "exp": np.exp}


class SingularInformationError(np.linalg.LinAlgError):
    """Information matrix is not positive definite, so it has no usable inverse."""


def z_quantile(level: float) -> float:
    """Two-sided normal critical value for a confidence ``level``."""
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level}")
    if level == 0.95:
        return Z_95
    return float(ndtri(1.0 - (1.0 - level) / 2.0))


def inverse_fi(fi, name: str = "information matrix") -> np.ndarray:
    """Invert a symmetric positive-definite matrix through its Cholesky factor."""
    fi = np.asarray(fi, dtype=float)
    if fi.ndim != 2 or fi.shape[0] != fi.shape[1]:
        raise ValueError(f"{name} must be square, got shape {fi.shape}")
    if not np.all(np.isfinite(fi)):
        raise SingularInformationError(f"{name} has non-finite entries")
    try:
        c = np.linalg.cholesky(fi)
    except np.linalg.LinAlgError as exc:
        raise SingularInformationError(f"{name} is not positive definite") from exc
    cinv = np.linalg.solve(c, np.eye(fi.shape[0]))
    return cinv.T @ cinv


def standard_errors(fi, name: str = "information matrix") -> np.ndarray:
    return np.sqrt(np.diag(inverse_fi(fi, name)))


@dataclass(frozen=True)
class Functional:
    """``transform(c' theta)``: log-odds (identity), probability (expit) or odds (exp)."""

    c: tuple[float, ...]
    transform: str = "identity"

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(float(v) for v in self.c))
        if self.transform not in _TRANSFORMS:
            raise ValueError(f"transform must be one of {sorted(_TRANSFORMS)}")
        if not np.all(np.isfinite(self.c)):
            raise ValueError("functional coefficients must be finite")

    @classmethod
    def conditional(cls, spec: ModelSpec, lags, x=(), transform: str = "expit") -> "Functional":
        """Log-odds / probability / odds of ``Y_t = 1`` at a given lag configuration and covariate row."""
        lags = tuple(lags)
        x = tuple(x)
        if len(lags) != spec.p or len(x) != spec.l:
            raise ValueError(f"need {spec.p} lag values and {spec.l} covariate values")
        return cls(x + (1.0,) + lags, transform)

    def apply(self, u):
        return _TRANSFORMS[self.transform](u)


@dataclass(frozen=True)
class IntervalEstimate:
    point: float
    lower: float
    upper: float
    level: float
    fi_source: str = "exact"
    se: float = float("nan")

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def to_dict(self) -> dict:
        return {
            "point": self.point,
            "lower": self.lower,
            "upper": self.upper,
            "level": self.level,
            "fi_source": self.fi_source,
            "se": self.se,
        }


def functional_ci(theta_hat, fi, f: Functional, level: float = 0.95, fi_source: str = "exact") -> IntervalEstimate:
    """Wald interval on the log-odds scale, endpoints mapped through the transform."""
    theta_hat = np.asarray(theta_hat, dtype=float)
    c = np.asarray(f.c)
    if c.shape != theta_hat.shape:
        raise ValueError(f"functional has {c.size} coefficients, parameter has {theta_hat.size}")
    cov = inverse_fi(fi, f"{fi_source} Fisher information")
    eta = float(c @ theta_hat)
    se = float(np.sqrt(c @ cov @ c))
    half = z_quantile(level) * se
    return IntervalEstimate(
        point=float(f.apply(eta)),
        lower=float(f.apply(eta - half)),
        upper=float(f.apply(eta + half)),
        level=level,
        fi_source=fi_source,
        se=se,
    )


def _unit(d: int, j: int) -> np.ndarray:
    if not 0 <= j < d:
        raise ValueError(f"coordinate {j} outside 0..{d - 1}")
    e = np.zeros(d)
    e[j] = 1.0
    return e


def wald_ci(theta_hat, fi, coord: int, level: float = 0.95, fi_source: str = "exact") -> IntervalEstimate:
    theta_hat = np.asarray(theta_hat, dtype=float)
    return functional_ci(theta_hat, fi, Functional(_unit(theta_hat.size, coord)), level, fi_source)


def wald_test(theta_hat, fi, coord: int, fi_source: str = "exact") -> tuple[float, bool]:
    """Wald statistic for ``theta[coord] = 0`` and whether it rejects at the 5% level."""
    theta_hat = np.asarray(theta_hat, dtype=float)
    _unit(theta_hat.size, coord)
    se = standard_errors(fi, f"{fi_source} Fisher information")[coord]
    z = float(theta_hat[coord] / se)
    return z, abs(z) > Z_95


@dataclass
class OrderRow:
    p: int
    loglik: float
    aic: float
    bic: float
    status: str
    best_aic: bool = False
    best_bic: bool = False


def order_selection(
    panel: SubjectPanel,
    p_candidates: Sequence[int],
    l: int | None = None,
    config: FitConfig | None = None,
) -> list[OrderRow]:
    """Fit each lag order and tabulate ``AIC = -2l + 2p`` and ``BIC = -2l + p log N``.

    The penalties count the lag order ``p`` rather than the number of
    parameters.  ``N`` is the total number of observations in the panel,
    which is the series length ``T`` for a single subject.  Diverged fits
    get NaN criteria and are never selected.
    """
    if not p_candidates:
        raise ValueError("need at least one candidate lag order")
    l = panel.spec.l if l is None else l
    n_obs = panel.n_observations
    rows = []
    for p in p_candidates:
        fit = fit_mle(panel.with_spec(ModelSpec(p=p, l=l)), config)
        if fit.status == DIVERGED:
            rows.append(OrderRow(p, fit.loglik, float("nan"), float("nan"), fit.status))
            continue
        rows.append(
            OrderRow(
                p=p,
                loglik=fit.loglik,
                aic=-2.0 * fit.loglik + 2.0 * p,
                bic=-2.0 * fit.loglik + p * np.log(n_obs),
                status=fit.status,
            )
        )
    valid = [r for r in rows if np.isfinite(r.aic)]
    if valid:
        min(valid, key=lambda r: r.aic).best_aic = True
        min(valid, key=lambda r: r.bic).best_bic = True
    return rows
