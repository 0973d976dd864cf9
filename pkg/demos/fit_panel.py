"""Fit a LARX(1) model to a simulated multi-subject panel and report intervals.

Mirrors what ``larfisher fit`` prints, but through the library API.

Run: python demos/fit_panel.py
"""

from larfisher import ModelSpec
from larfisher.cli import simulate_panel
from larfisher.estimation import fit_mle
from larfisher.report import format_result, parse_functional, result_document

spec = ModelSpec(1, 1)
data = simulate_panel(spec, [0.5, 0.1, 0.5], T=24, n_subjects=113, seed=4)
data = data.with_threshold("x1", 0.5, name="high")
panel = data.to_panel(spec, ["high"])

fit = fit_mle(panel)
funcs = [(t, parse_functional(t, spec, ["high"])) for t in ("prob|lag=1|high=1", "odds|lag=0|high=0")]
doc = result_document(fit, ["high"], 0.95, ["exact", "empirical"], funcs,
                      len(panel), panel.n_observations, metadata={})
print(format_result(doc))
