"""A small Monte Carlo run of the LAR(1) low-ratio scenario.

Reports type I error, average standard errors and the observed spread of
the lag coefficient for both information sources.  Raise ``REPS`` for
tighter numbers; the published tables use 10,000.

Run: python demos/small_table.py
"""

from larfisher import ModelSpec
from larfisher.montecarlo import ScenarioConfig, run_scenario

REPS = 300

for T in (50, 200):
    cfg = ScenarioConfig(ModelSpec(1), (0.1, 0.5), T, REPS, seed=1)
    s = run_scenario(cfg)
    print(f"T={T}  diverged fits: {s.n_diverged}")
    for r in s.rows():
        print(f"  {r['fi_source']:<10} type I {r['type1_rate']:.3f}  avg SE {r['avg_se_at_mle']:.3f}"
              f"  SE at truth {r['se_at_truth']:.3f}  observed SD {r['observed_sd']:.3f}")
