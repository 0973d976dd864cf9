"""Exact conditional Fisher information for logistic autoregressive binary time series."""

__version__ = "0.1.0"

from .estimation import FitConfig, FitResult, Subject, SubjectPanel, fit_mle
from .exact import (
    ex_fi_bruteforce,
    ex_fi_forward,
    ex_fi_functional_iteration,
    ex_fi_lar1_closed_form,
    qt_forward,
)
from .inference import Functional, functional_ci, order_selection, wald_ci, wald_test
from .model import ModelSpec, cond_prob, em_fi, hessian, log_likelihood, score
from .montecarlo import InitialPolicy, ScenarioConfig, run_scenario, simulate_series

__all__ = [
    "FitConfig",
    "FitResult",
    "Functional",
    "InitialPolicy",
    "ModelSpec",
    "ScenarioConfig",
    "Subject",
    "SubjectPanel",
    "cond_prob",
    "em_fi",
    "ex_fi_bruteforce",
    "ex_fi_forward",
    "ex_fi_functional_iteration",
    "ex_fi_lar1_closed_form",
    "fit_mle",
    "functional_ci",
    "hessian",
    "log_likelihood",
    "order_selection",
    "qt_forward",
    "run_scenario",
    "score",
    "simulate_series",
    "wald_ci",
    "wald_test",
]
