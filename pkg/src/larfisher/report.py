"""Result documents and text tables for fitted models."""

from __future__ import annotations

import math

import numpy as np

from .estimation import FitResult
from .inference import Functional, SingularInformationError, functional_ci, wald_ci
from .model import ModelSpec

__all__ = ["FUNCTIONAL_KINDS", "parse_functional", "result_document", "format_result"]

FUNCTIONAL_KINDS = {"prob": "expit", "odds": "exp", "logodds": "identity"}


def parse_functional(text: str, spec: ModelSpec, covariates: list[str]) -> Functional:
    """Parse ``"prob|lag=1|stress=0"`` into a :class:`Functional`.

    The first field is ``prob``, ``odds`` or ``logodds``.  The rest assign
    lag values (``lag`` is ``lag1``; ``lag2=...`` for deeper lags) and
    covariate values by column name.  Every lag and covariate must be set.
    """
    kind, *fields = [f.strip() for f in text.split("|")]
    if kind not in FUNCTIONAL_KINDS:
        raise ValueError(f"functional must start with one of {', '.join(FUNCTIONAL_KINDS)}: {text!r}")
    values: dict[str, float] = {}
    for f in fields:
        key, sep, val = f.partition("=")
        key = key.strip()
        if not sep:
            raise ValueError(f"expected name=value in functional, got {f!r}")
        if key == "lag":
            key = "lag1"
        if key in values:
            raise ValueError(f"{key} assigned twice in functional {text!r}")
        values[key] = float(val)
    lag_names = [f"lag{k}" for k in range(1, spec.p + 1)]
    unknown = set(values) - set(lag_names) - set(covariates)
    if unknown:
        raise ValueError(f"unknown name(s) in functional: {', '.join(sorted(unknown))}")
    missing = [n for n in lag_names + list(covariates) if n not in values]
    if missing:
        raise ValueError(f"functional {text!r} leaves {', '.join(missing)} unset")
    for n in lag_names:
        if values[n] not in (0.0, 1.0):
            raise ValueError(f"{n} must be 0 or 1")
    return Functional.conditional(
        spec,
        lags=[values[n] for n in lag_names],
        x=[values[c] for c in covariates],
        transform=FUNCTIONAL_KINDS[kind],
    )


def _interval(fn, *args):
    try:
        return fn(*args).to_dict()
    except SingularInformationError as exc:
        return {"error": str(exc)}


def result_document(
    fit: FitResult,
    covariates: list[str],
    level: float,
    sources: list[str],
    functionals: list[tuple[str, Functional]],
    n_subjects: int,
    n_observations: int,
    metadata: dict,
) -> dict:
    spec = fit.spec
    coefs = []
    for j, name in enumerate(spec.labels):
        entry = {"name": name, "term": _term(spec, j, covariates), "estimate": float(fit.theta_hat[j])}
        for src in sources:
            entry[src] = _interval(wald_ci, fit.theta_hat, fit.fi(src), j, level, src)
        coefs.append(entry)
    funcs = []
    for text, f in functionals:
        entry = {"expr": text, "transform": f.transform, "c": list(f.c)}
        for src in sources:
            entry[src] = _interval(functional_ci, fit.theta_hat, fit.fi(src), f, level, src)
        funcs.append(entry)
    aic = -2.0 * fit.loglik + 2.0 * spec.p
    bic = -2.0 * fit.loglik + spec.p * math.log(n_observations)
    return {
        "model": {"name": spec.name, "p": spec.p, "l": spec.l, "covariates": covariates,
                  "parameters": spec.labels},
        "status": fit.status,
        "iterations": fit.iterations,
        "loglik": fit.loglik,
        "aic": aic,
        "bic": bic,
        "n_subjects": n_subjects,
        "n_observations": n_observations,
        "n_effective": fit.n_effective,
        "level": level,
        "fi_sources": sources,
        "coefficients": coefs,
        "functionals": funcs,
        "information": {src: np.asarray(fit.fi(src)).tolist() for src in sources},
        "metadata": metadata,
    }


def _term(spec: ModelSpec, j: int, covariates: list[str]) -> str:
    if j < spec.l:
        return covariates[j]
    k = j - spec.l
    return "intercept" if k == 0 else f"y[t-{k}]"


def _fmt_ci(entry: dict) -> str:
    if "error" in entry:
        return "singular"
    return f"({entry['lower']:.4g}, {entry['upper']:.4g})"


def format_result(doc: dict) -> str:
    """Plain-text table: coefficients, then functionals, one CI column per FI source."""
    sources = doc["fi_sources"]
    pct = f"{100 * doc['level']:g}%"
    lines = [
        f"{doc['model']['name']} fit on {doc['n_subjects']} subject(s), "
        f"{doc['n_effective']} modelled responses: {doc['status']} after {doc['iterations']} iteration(s)",
        f"loglik {doc['loglik']:.6g}   AIC {doc['aic']:.6g}   BIC {doc['bic']:.6g}",
        "",
    ]
    head = f"{'term':<14}{'estimate':>12}" + "".join(f"{src + ' SE':>16}{src + ' ' + pct + ' CI':>30}" for src in sources)
    lines += [head, "-" * len(head)]
    for c in doc["coefficients"]:
        row = f"{c['term']:<14}{c['estimate']:>12.5g}"
        for src in sources:
            e = c[src]
            se = "n/a" if "error" in e else f"{e['se']:.5g}"
            row += f"{se:>16}{_fmt_ci(e):>30}"
        lines.append(row)
    if doc["functionals"]:
        lines += ["", f"{'functional':<30}{'point':>10}" + "".join(f"{src + ' ' + pct + ' CI':>30}" for src in sources)]
        for f in doc["functionals"]:
            point = next((f[s]["point"] for s in sources if "point" in f[s]), float("nan"))
            lines.append(f"{f['expr']:<30}{point:>10.4g}" + "".join(f"{_fmt_ci(f[s]):>30}" for s in sources))
    return "\n".join(lines) + "\n"
