"""Named simulation studies with their published scenario parameters."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .model import ModelSpec
from .montecarlo import ScenarioConfig, ci_length_study, frobenius_study, run_scenario
from .reference import CITATION, FIGURE_NOTES, lookup

__all__ = ["STUDIES", "StudyOptions", "run_study", "trend_labels"]

STUDIES = ("table1", "table2", "table3", "fig1", "fig2", "fig3", "fig5")

# (spec, theta in (alpha, beta) layout, tested coordinates)
_TABLE_SCENARIOS = {
    "table1": {
        "low": (ModelSpec(1), (0.1, 0.5), (1,)),
        "high": (ModelSpec(1), (0.1, 1.0), (1,)),
    },
    "table2": {
        "low": (ModelSpec(2), (0.1, 0.3, 0.5), (1, 2)),
        "high": (ModelSpec(2), (0.1, 1.0, 1.5), (1, 2)),
    },
    "table3": {
        "low": (ModelSpec(1, 1), (0.5, 0.1, 0.5), (0, 2)),
        "high": (ModelSpec(1, 1), (0.5, 0.1, 1.0), (0, 2)),
    },
}

_DEFAULT_REPLICATES = {"table1": 10000, "table2": 10000, "table3": 10000,
                       "fig1": 1000, "fig2": 1000, "fig3": 1000, "fig5": 1000}


@dataclass
class StudyOptions:
    replicates: int | None = None
    seed: int = 0
    T: Sequence[int] | None = None
    ratios: Sequence[str] = ("low", "high")
    table3_high_alpha: float = 0.5
    workers: int | None = None
    beta1_grid: Sequence[float] | None = None
    extra: dict = field(default_factory=dict)

    def replicates_for(self, study: str) -> int:
        return self.replicates or _DEFAULT_REPLICATES[study]

    def to_dict(self) -> dict:
        return {
            "replicates": self.replicates,
            "seed": self.seed,
            "T": None if self.T is None else [int(t) for t in self.T],
            "ratios": list(self.ratios),
            "table3_high_alpha": self.table3_high_alpha,
            "beta1_grid": None if self.beta1_grid is None else [float(b) for b in self.beta1_grid],
        }


def trend_labels(values: Sequence[float]) -> list[str]:
    """Direction of change from the previous grid point."""
    out = []
    for i, v in enumerate(values):
        if i == 0:
            out.append("start")
        elif not (np.isfinite(v) and np.isfinite(values[i - 1])):
            out.append("n/a")
        else:
            out.append("down" if v < values[i - 1] else "up" if v > values[i - 1] else "flat")
    return out


def _table_rows(study: str, opts: StudyOptions) -> list[dict]:
    Ts = list(opts.T) if opts.T else [20, 50, 200]
    rows = []
    for ratio in opts.ratios:
        spec, theta, tested = _TABLE_SCENARIOS[study][ratio]
        if study == "table3" and ratio == "high":
            theta = (opts.table3_high_alpha,) + theta[1:]
        for T in Ts:
            cfg = ScenarioConfig(spec, theta, T, opts.replicates_for(study), seed=opts.seed, tested=tested)
            summary = run_scenario(cfg, workers=opts.workers)
            for r in summary.rows():
                ref = lookup(study, ratio, T, r["coefficient"], r["fi_source"]) or {}
                row = {"study": study, "ratio": ratio, "T": T, "replicates": summary.replicates}
                row.update(r)
                for k in ("type1_rate", "avg_se_at_mle", "se_at_truth", "mc_se", "observed_sd"):
                    row[f"published_{k}"] = ref.get(k, float("nan"))
                row["reference"] = CITATION[study]
                rows.append(row)
    return rows


def _with_trend(rows: list[dict], key: str, note: str, study: str) -> list[dict]:
    for r, trend in zip(rows, trend_labels([r[key] for r in rows])):
        r["trend"] = trend
        r["published_note"] = note
        r["reference"] = CITATION[study]
    return rows


def run_study(study: str, opts: StudyOptions | None = None) -> list[dict]:
    """Run one named study and return plot-ready rows."""
    opts = opts or StudyOptions()
    if study not in STUDIES:
        raise ValueError(f"unknown study {study!r}; choose from {', '.join(STUDIES)}")
    if study.startswith("table"):
        return _table_rows(study, opts)

    reps = opts.replicates_for(study)
    lar1 = ModelSpec(1)
    rows: list[dict] = []
    if study == "fig1":
        grid = list(opts.T) if opts.T else list(range(5, 101, 5)) + list(range(110, 201, 10))
        base = ScenarioConfig(lar1, (0.1, 1.0), max(grid), reps, seed=opts.seed)
        part = ci_length_study(base, grid, over="T", workers=opts.workers)
        rows = _with_trend([{"beta1_over_beta0": 10.0, **r} for r in part], "mean_rel_diff", FIGURE_NOTES[study], study)
    elif study == "fig2":
        grid = list(opts.beta1_grid) if opts.beta1_grid else [round(0.25 * i, 2) for i in range(1, 9)]
        for T in (list(opts.T) if opts.T else [60, 100]):
            base = ScenarioConfig(lar1, (0.1, 0.5), T, reps, seed=opts.seed)
            part = ci_length_study(base, grid, over="beta1", workers=opts.workers)
            rows += _with_trend([{"T": T, **r} for r in part], "mean_rel_diff", FIGURE_NOTES[study], study)
    elif study in ("fig3", "fig5"):
        if study == "fig3":
            mode, setups = "inverse_fi", ((5.0, (0.1, 0.5)), (10.0, (0.1, 1.0)))
            grid = list(opts.T) if opts.T else list(range(10, 251, 10))
        else:
            mode, setups = "fi", ((5.0, (0.1, 0.5)),)
            grid = list(opts.T) if opts.T else list(range(5, 250, 5)) + list(range(250, 551, 50))
        for ratio, theta in setups:
            base = ScenarioConfig(lar1, theta, max(grid), reps, seed=opts.seed)
            part = frobenius_study(base, grid, mode=mode, workers=opts.workers)
            rows += _with_trend([{"beta1_over_beta0": ratio, "mode": mode, **r} for r in part],
                                "mean_frobenius", FIGURE_NOTES[study], study)
    return rows
