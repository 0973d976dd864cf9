"""Exact versus empirical Fisher information for one LAR(2) series.

Run: python demos/exact_information.py
"""

import numpy as np

from larfisher import ModelSpec
from larfisher.exact import (
    ex_fi_bruteforce,
    ex_fi_forward,
    ex_fi_functional_iteration,
    initial_state,
    qt_forward,
)
from larfisher.model import em_fi
from larfisher.montecarlo import make_rng, simulate_series

spec = ModelSpec(2)
theta = np.array([0.1, 0.8, -0.5])
y, _ = simulate_series(theta, spec, 18, make_rng(1))
s0 = initial_state(y, spec.p)

# three routes to the same matrix
fwd = ex_fi_forward(theta, spec, s0, y.size)
print("forward recursion\n", fwd)
print("functional iteration max diff", np.abs(ex_fi_functional_iteration(theta, spec, s0, y.size) - fwd).max())
print("path enumeration max diff   ", np.abs(ex_fi_bruteforce(theta, spec, s0, y.size) - fwd).max())

# the observed-data version depends on which path was realized
print("empirical (observed) information\n", em_fi(theta, y, None, spec))

# lag-state distribution settles toward the stationary law
Q = qt_forward(theta, spec, s0, y.size)
print("Q_t at t = p+1, p+2, T:\n", Q[[0, 1, -1]].round(4))
