"""Lag-order selection by AIC/BIC, and what a separated series looks like.

Run: python demos/order_and_separation.py
"""

import numpy as np

from larfisher import ModelSpec
from larfisher.estimation import SubjectPanel, fit_mle
from larfisher.inference import order_selection
from larfisher.montecarlo import make_rng, simulate_series

truth = ModelSpec(2)
ys = [simulate_series([-0.5, 0.2, 1.5], truth, 150, make_rng(7, k))[0] for k in range(4)]
panel = SubjectPanel.from_series(ys, ModelSpec(1))
for row in order_selection(panel, [1, 2, 3, 4]):
    flags = ("  <- AIC" if row.best_aic else "") + ("  <- BIC" if row.best_bic else "")
    print(f"p={row.p}  loglik {row.loglik:9.3f}  AIC {row.aic:9.3f}  BIC {row.bic:9.3f}{flags}")

# every 0 is followed by a 1: the lag coefficient runs off to -infinity
y = np.array([0, 1, 1, 0, 1, 1, 1, 0, 1, 1, 0, 1])
fit = fit_mle(SubjectPanel.from_series([y], ModelSpec(1)))
print(fit.status, fit.theta_hat.round(2))
