"""Simulation of LAR/LARX series and the Monte Carlo studies built on them.

Every replicate draws from its own generator seeded by
``SeedSequence(seed, spawn_key=(stream, k))``, so replicate ``k`` does not
depend on how many replicates run or on how they are scheduled.  Results
are reduced in replicate order.

Fits that diverge under separation stay in every average with their last
iterate; only replicates whose information matrix cannot be inverted are
left out of SE averages, and those are counted.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .estimation import DIVERGED, FitConfig, SubjectPanel, fit_mle
from .exact import encode_state, ex_fi_forward, initial_state
from .inference import SingularInformationError, inverse_fi, standard_errors, wald_test
from .model import ModelSpec, em_fi

__all__ = [
    "SOURCES",
    "InitialPolicy",
    "ScenarioConfig",
    "McSummary",
    "make_rng",
    "default_workers",
    "simulate_series",
    "run_scenario",
    "ci_length_study",
    "frobenius_study",
]

SOURCES = ("exact", "empirical")

_SE_STREAM = 0
_NULL_STREAM = 1
_CI_STREAM = 1000
_FROB_STREAM = 2000


def make_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=tuple(key))))


def default_workers() -> int:
    return max(1, int(os.environ.get("LARFISHER_WORKERS", "1")))


@dataclass(frozen=True)
class InitialPolicy:
    """How ``y_1..y_p`` are drawn: a fixed state or iid Bernoulli(q) values."""

    kind: str = "iid_bernoulli"
    q: float = 0.5
    state: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind == "iid_bernoulli":
            if not 0.0 < self.q < 1.0:
                raise ValueError("Bernoulli initial probability must lie in (0, 1)")
        elif self.kind == "fixed":
            if self.state is None:
                raise ValueError("fixed initial policy needs a state")
            encode_state(self.state)
        else:
            raise ValueError(f"unknown initial policy {self.kind!r}")

    @classmethod
    def fixed(cls, state) -> "InitialPolicy":
        return cls(kind="fixed", state=tuple(int(b) for b in state))

    @classmethod
    def bernoulli(cls, q: float = 0.5) -> "InitialPolicy":
        return cls(kind="iid_bernoulli", q=q)

    def draw(self, p: int, rng: np.random.Generator) -> np.ndarray:
        """Initial block in time order ``(y_1, ..., y_p)``."""
        if self.kind == "fixed":
            if len(self.state) != p:
                raise ValueError(f"fixed initial state has {len(self.state)} values, model needs {p}")
            # state lists (y_{p}, ..., y_1)
            return np.array(self.state[::-1], dtype=np.int8)
        return (rng.random(p) < self.q).astype(np.int8)


def simulate_series(
    theta,
    spec: ModelSpec,
    T: int,
    rng: np.random.Generator,
    initial_policy: InitialPolicy | None = None,
    exog_policy: str | None = None,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Draw one series from the model; covariates (if any) are drawn first."""
    theta = spec.check_theta(theta)
    if int(T) != T or T < spec.p + 1:
        raise ValueError(f"T={T} must be an integer >= p+1")
    initial_policy = initial_policy or InitialPolicy()
    if exog_policy is None:
        exog_policy = "iid_standard_normal" if spec.l else "none"
    if exog_policy == "none":
        if spec.l:
            raise ValueError("model has exogenous covariates but exog_policy is 'none'")
        x = None
        x_eta = np.zeros(T)
    elif exog_policy == "iid_standard_normal":
        if not spec.l:
            raise ValueError("exog_policy draws covariates but the model has l = 0")
        x = rng.standard_normal((T, spec.l))
        x_eta = x @ theta[: spec.l]
    else:
        raise ValueError(f"unknown exog_policy {exog_policy!r}")

    p = spec.p
    beta = theta[spec.l :]
    y = np.zeros(T, dtype=np.int8)
    y[:p] = initial_policy.draw(p, rng)
    u = rng.random(T - p)
    b0, lag_coef = float(beta[0]), [float(b) for b in beta[1:]]
    for t in range(p, T):
        eta = b0 + x_eta[t]
        for k, b in enumerate(lag_coef, start=1):
            if y[t - k]:
                eta += b
        prob = 1.0 / (1.0 + math.exp(-eta)) if eta >= 0 else math.exp(eta) / (1.0 + math.exp(eta))
        y[t] = u[t - p] < prob
    return y, x


@dataclass(frozen=True)
class ScenarioConfig:
    """One simulation scenario.

    ``tested`` lists the coordinates whose Wald tests and standard errors are
    reported (default ``beta_1``).  The type I error for coordinate ``j`` is
    estimated on data regenerated with ``theta[j] = 0``; ``theta_null``
    overrides that generating value when a single coordinate is tested.
    """

    spec: ModelSpec
    theta_true: tuple[float, ...]
    T: int
    replicates: int
    seed: int = 0
    tested: tuple[int, ...] | None = None
    theta_null: tuple[float, ...] | None = None
    initial_policy: InitialPolicy = field(default_factory=InitialPolicy)
    exog_policy: str | None = None
    fit_config: FitConfig = field(default_factory=FitConfig)

    def __post_init__(self):
        object.__setattr__(self, "theta_true", tuple(float(v) for v in self.spec.check_theta(self.theta_true)))
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.T < self.spec.p + 2:
            raise ValueError(f"T={self.T} too short to fit a model with p={self.spec.p}")
        if self.tested is None:
            object.__setattr__(self, "tested", (self.spec.beta_index(1),))
        object.__setattr__(self, "tested", tuple(int(j) for j in self.tested))
        for j in self.tested:
            if not 0 <= j < self.spec.d:
                raise ValueError(f"tested coordinate {j} outside 0..{self.spec.d - 1}")
        if self.theta_null is not None:
            if len(self.tested) != 1:
                raise ValueError("theta_null can only be given with a single tested coordinate")
            object.__setattr__(self, "theta_null", tuple(float(v) for v in self.spec.check_theta(self.theta_null)))

    @property
    def theta(self) -> np.ndarray:
        return np.array(self.theta_true)

    def null_theta(self, j: int) -> np.ndarray:
        if self.theta_null is not None:
            return np.array(self.theta_null)
        theta = self.theta.copy()
        theta[j] = 0.0
        return theta

    def to_dict(self) -> dict:
        return {
            "model": self.spec.name,
            "p": self.spec.p,
            "l": self.spec.l,
            "theta_true": list(self.theta_true),
            "T": self.T,
            "replicates": self.replicates,
            "seed": self.seed,
            "tested": [self.spec.label(j) for j in self.tested],
            "theta_null": None if self.theta_null is None else list(self.theta_null),
            "initial_policy": {"kind": self.initial_policy.kind, "q": self.initial_policy.q,
                               "state": None if self.initial_policy.state is None else list(self.initial_policy.state)},
            "exog_policy": self.exog_policy or ("iid_standard_normal" if self.spec.l else "none"),
            "fit_config": vars(self.fit_config).copy(),
        }


@dataclass
class McSummary:
    """Per-coordinate aggregates of one scenario run (arrays follow ``tested``)."""

    labels: list[str]
    replicates: int
    type1_rate: dict[str, np.ndarray]
    avg_se_at_mle: dict[str, np.ndarray]
    se_at_truth: dict[str, np.ndarray]
    mc_se: dict[str, np.ndarray]
    observed_sd: np.ndarray
    mean_estimate: np.ndarray
    n_diverged: int
    n_diverged_null: int
    n_singular: dict[str, int]

    def rows(self) -> list[dict]:
        out = []
        for i, label in enumerate(self.labels):
            for src in SOURCES:
                out.append({
                    "coefficient": label,
                    "fi_source": src,
                    "type1_rate": float(self.type1_rate[src][i]),
                    "avg_se_at_mle": float(self.avg_se_at_mle[src][i]),
                    "se_at_truth": float(self.se_at_truth[src][i]),
                    "mc_se": float(self.mc_se[src][i]),
                    "observed_sd": float(self.observed_sd[i]),
                    "mean_estimate": float(self.mean_estimate[i]),
                    "n_diverged": self.n_diverged,
                    "n_singular": self.n_singular[src],
                })
        return out


def _safe_se(fi) -> np.ndarray | None:
    try:
        return standard_errors(fi)
    except SingularInformationError:
        return None


def _fit_one(y, x, spec: ModelSpec, config: FitConfig):
    panel = SubjectPanel.from_series([y], spec, None if x is None else [x])
    return fit_mle(panel, config)


def _scenario_replicate(cfg: ScenarioConfig, k: int) -> dict:
    spec = cfg.spec
    cols = list(cfg.tested)
    nan = np.full(len(cols), np.nan)
    rng = make_rng(cfg.seed, _SE_STREAM, k)
    y, x = simulate_series(cfg.theta, spec, cfg.T, rng, cfg.initial_policy, cfg.exog_policy)
    fit = _fit_one(y, x, spec, cfg.fit_config)
    ex_truth = ex_fi_forward(cfg.theta, spec, initial_state(y, spec.p), cfg.T, x)
    em_truth = em_fi(cfg.theta, y, x, spec)
    out = {"estimate": fit.theta_hat[cols], "diverged": fit.status == DIVERGED}
    for src, at_mle, at_truth in (("exact", fit.ex_fi, ex_truth), ("empirical", fit.em_fi, em_truth)):
        se = _safe_se(at_mle)
        out[f"se_mle_{src}"] = nan if se is None else se[cols]
        se = _safe_se(at_truth)
        out[f"se_truth_{src}"] = nan if se is None else se[cols]

    rejects = {src: np.zeros(len(cols)) for src in SOURCES}
    null_singular = {src: 0 for src in SOURCES}
    null_diverged = 0
    for i, j in enumerate(cols):
        rng = make_rng(cfg.seed, _NULL_STREAM + i, k)
        theta0 = cfg.null_theta(j)
        y0, x0 = simulate_series(theta0, spec, cfg.T, rng, cfg.initial_policy, cfg.exog_policy)
        fit0 = _fit_one(y0, x0, spec, cfg.fit_config)
        null_diverged += fit0.status == DIVERGED
        for src in SOURCES:
            try:
                rejects[src][i] = wald_test(fit0.theta_hat, fit0.fi(src), j, src)[1]
            except SingularInformationError:
                # no usable standard error: the test cannot reject
                null_singular[src] += 1
    out["reject"] = rejects
    out["null_diverged"] = null_diverged
    out["null_singular"] = null_singular
    return out


def _map_replicates(fn: Callable, args: list, workers: int | None) -> list:
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(args) < 2:
        return [fn(*a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, *zip(*args), chunksize=max(1, len(args) // (4 * workers))))


def run_scenario(cfg: ScenarioConfig, workers: int | None = None) -> McSummary:
    reps = _map_replicates(_scenario_replicate, [(cfg, k) for k in range(cfg.replicates)], workers)
    n = len(reps)
    est = np.array([r["estimate"] for r in reps])
    type1, avg_se, se_truth, mc_se, n_singular = {}, {}, {}, {}, {}
    for src in SOURCES:
        se = np.array([r[f"se_mle_{src}"] for r in reps])
        usable = np.isfinite(se).sum(axis=0)
        avg_se[src] = np.nanmean(se, axis=0) if usable.min() else np.full(se.shape[1], np.nan)
        mc_se[src] = (np.nanstd(se, axis=0, ddof=1) / np.sqrt(usable)) if usable.min() > 1 else np.full(se.shape[1], np.nan)
        truth = np.array([r[f"se_truth_{src}"] for r in reps])
        se_truth[src] = np.nanmean(truth, axis=0) if np.isfinite(truth).sum(axis=0).min() else np.full(truth.shape[1], np.nan)
        type1[src] = np.array([r["reject"][src] for r in reps]).mean(axis=0)
        n_singular[src] = int((~np.isfinite(se)).any(axis=1).sum()) + sum(r["null_singular"][src] for r in reps)
    return McSummary(
        labels=[cfg.spec.label(j) for j in cfg.tested],
        replicates=n,
        type1_rate=type1,
        avg_se_at_mle=avg_se,
        se_at_truth=se_truth,
        mc_se=mc_se,
        observed_sd=est.std(axis=0, ddof=1) if n > 1 else np.zeros(est.shape[1]),
        mean_estimate=est.mean(axis=0),
        n_diverged=int(sum(r["diverged"] for r in reps)),
        n_diverged_null=int(sum(r["null_diverged"] for r in reps)),
        n_singular=n_singular,
    )


def _grid_config(base: ScenarioConfig, over: str, value) -> ScenarioConfig:
    if over == "T":
        return replace(base, T=int(value))
    if over == "beta1":
        theta = base.theta.copy()
        theta[base.spec.beta_index(1)] = float(value)
        return replace(base, theta_true=tuple(theta))
    raise ValueError(f"grid must run over 'T' or 'beta1', got {over!r}")


def _ci_replicate(cfg: ScenarioConfig, gi: int, k: int, coord: int, sources: tuple[str, str]):
    rng = make_rng(cfg.seed, _CI_STREAM, gi, k)
    y, x = simulate_series(cfg.theta, cfg.spec, cfg.T, rng, cfg.initial_policy, cfg.exog_policy)
    fit = _fit_one(y, x, cfg.spec, cfg.fit_config)
    se = [_safe_se(fit.fi(src)) for src in sources]
    if se[0] is None or se[1] is None:
        return None, fit.status == DIVERGED
    # CI lengths are 2 z se, so the length ratio is the SE ratio
    return (se[0][coord] - se[1][coord]) / se[1][coord], fit.status == DIVERGED


def ci_length_study(
    base: ScenarioConfig,
    grid: Sequence,
    over: str = "T",
    coord: int | None = None,
    sources: tuple[str, str] = ("empirical", "exact"),
    workers: int | None = None,
) -> list[dict]:
    """Mean relative CI length difference ``(len_a - len_b) / len_b`` per grid point.

    With the default ``sources`` this is (empirical - exact) / exact for the
    coefficient ``coord`` (default ``beta_1``); ``base.replicates`` series are
    drawn per grid point.
    """
    if not len(grid):
        raise ValueError("grid must be nonempty")
    coord = base.spec.beta_index(1) if coord is None else coord
    rows = []
    for gi, value in enumerate(grid):
        cfg = _grid_config(base, over, value)
        reps = _map_replicates(_ci_replicate, [(cfg, gi, k, coord, sources) for k in range(cfg.replicates)], workers)
        rel = np.array([r for r, _ in reps if r is not None])
        rows.append({
            over: value,
            "mean_rel_diff": float(rel.mean()) if rel.size else float("nan"),
            "median_rel_diff": float(np.median(rel)) if rel.size else float("nan"),
            "n_used": int(rel.size),
            "n_singular": int(sum(r is None for r, _ in reps)),
            "n_diverged": int(sum(dv for _, dv in reps)),
        })
    return rows


def _frob_replicate(cfg: ScenarioConfig, gi: int, k: int, mode: str):
    rng = make_rng(cfg.seed, _FROB_STREAM, gi, k)
    y, x = simulate_series(cfg.theta, cfg.spec, cfg.T, rng, cfg.initial_policy, cfg.exog_policy)
    fit = _fit_one(y, x, cfg.spec, cfg.fit_config)
    a, b = fit.ex_fi, fit.em_fi
    if mode == "inverse_fi":
        try:
            a, b = inverse_fi(a, "exact Fisher information"), inverse_fi(b, "empirical Fisher information")
        except SingularInformationError:
            return None, fit.status == DIVERGED
    return float(np.linalg.norm(a - b, "fro")), fit.status == DIVERGED


def frobenius_study(
    base: ScenarioConfig,
    grid_T: Sequence[int],
    mode: str = "inverse_fi",
    workers: int | None = None,
) -> list[dict]:
    """Mean Frobenius norm of (exact - empirical) information, or of their inverses, per ``T``."""
    if mode not in ("inverse_fi", "fi"):
        raise ValueError("mode must be 'inverse_fi' or 'fi'")
    if not len(grid_T):
        raise ValueError("grid must be nonempty")
    rows = []
    for gi, T in enumerate(grid_T):
        cfg = _grid_config(base, "T", T)
        reps = _map_replicates(_frob_replicate, [(cfg, gi, k, mode) for k in range(cfg.replicates)], workers)
        norms = np.array([r for r, _ in reps if r is not None])
        rows.append({
            "T": int(T),
            "mean_frobenius": float(norms.mean()) if norms.size else float("nan"),
            "median_frobenius": float(np.median(norms)) if norms.size else float("nan"),
            "n_used": int(norms.size),
            "n_singular": int(sum(r is None for r, _ in reps)),
            "n_diverged": int(sum(dv for _, dv in reps)),
        })
    return rows
