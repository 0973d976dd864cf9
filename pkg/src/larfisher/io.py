"""Panel CSV files, result documents and run manifests.

Panel files are UTF-8 CSV with LF line endings and header
``subject,t,y[,covariates...]``.  Rows are sorted by subject then ``t``, and
``t`` runs 1, 2, ... without gaps inside each subject.  Floats are written
with ``repr`` so they round-trip exactly.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .estimation import Subject, SubjectPanel
from .model import ModelSpec

__all__ = [
    "PanelParseError",
    "PanelData",
    "read_panel",
    "parse_panel",
    "format_panel",
    "write_panel",
    "parse_threshold",
    "config_hash",
    "dump_json",
    "load_json",
    "manifest",
    "write_rows_csv",
    "write_qt_csv",
]


class PanelParseError(ValueError):
    """Malformed panel file; the message names the offending line."""


@dataclass
class PanelData:
    """Raw panel contents before a model is chosen."""

    covariate_names: list[str]
    subjects: list[tuple[str, np.ndarray, np.ndarray]]  # (id, y, x with all covariate columns)

    def to_panel(self, spec: ModelSpec, covariates: list[str] | None = None) -> SubjectPanel:
        cols = self.column_indices(covariates if covariates is not None else self.covariate_names)
        if len(cols) != spec.l:
            raise ValueError(f"model expects {spec.l} covariates, {len(cols)} selected")
        return SubjectPanel([Subject(sid, y, x[:, cols] if cols else None) for sid, y, x in self.subjects], spec)

    def column_indices(self, names: list[str]) -> list[int]:
        missing = [n for n in names if n not in self.covariate_names]
        if missing:
            raise ValueError(f"unknown covariate column(s): {', '.join(missing)}")
        return [self.covariate_names.index(n) for n in names]

    def with_threshold(self, column: str, cut: float, name: str | None = None) -> "PanelData":
        """Append an indicator column ``1[column > cut]``."""
        j = self.column_indices([column])[0]
        name = name or f"{column}>{cut:g}"
        subjects = [(sid, y, np.column_stack([x, (x[:, j] > cut).astype(float)])) for sid, y, x in self.subjects]
        return PanelData(self.covariate_names + [name], subjects)


def parse_threshold(text: str) -> tuple[str, float]:
    """``"stress>7"`` -> ``("stress", 7.0)``."""
    col, sep, cut = text.partition(">")
    if not sep or not col.strip():
        raise ValueError(f"threshold must look like 'column>cut', got {text!r}")
    return col.strip(), float(cut)


def parse_panel(text: str) -> PanelData:
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise PanelParseError("line 1: empty file") from None
    if header[:3] != ["subject", "t", "y"]:
        raise PanelParseError(f"line 1: header must start with subject,t,y; got {','.join(header)}")
    names = header[3:]
    if len(set(names)) != len(names):
        raise PanelParseError("line 1: duplicate covariate column names")

    order: list[str] = []
    rows: dict[str, list[tuple[int, list[float]]]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise PanelParseError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        sid = row[0].strip()
        try:
            t = int(row[1])
        except ValueError:
            raise PanelParseError(f"line {lineno}: time index {row[1]!r} is not an integer") from None
        if row[2].strip() not in ("0", "1"):
            raise PanelParseError(f"line {lineno}: y must be 0 or 1, got {row[2]!r}")
        vals = [float(row[2])]
        for name, cell in zip(names, row[3:]):
            try:
                v = float(cell)
            except ValueError:
                raise PanelParseError(f"line {lineno}: covariate {name} value {cell!r} is not numeric") from None
            if not math.isfinite(v):
                raise PanelParseError(f"line {lineno}: covariate {name} value {cell!r} is not finite")
            vals.append(v)
        if not order or sid != order[-1]:
            if sid in rows:
                raise PanelParseError(f"line {lineno}: rows of subject {sid!r} are not contiguous")
            order.append(sid)
            rows[sid] = []
        expected = len(rows[sid]) + 1
        if t != expected:
            raise PanelParseError(f"line {lineno}: subject {sid!r} expected t={expected}, got t={t}")
        rows[sid].append((t, vals))
    if not order:
        raise PanelParseError("line 2: panel has no data rows")

    subjects = []
    for sid in order:
        arr = np.array([v for _, v in rows[sid]], dtype=float)
        subjects.append((sid, arr[:, 0].astype(np.int8), arr[:, 1:]))
    return PanelData(names, subjects)


def read_panel(path) -> PanelData:
    return parse_panel(Path(path).read_text(encoding="utf-8"))


def _fmt(v: float) -> str:
    return repr(float(v))


def format_panel(data: PanelData) -> str:
    lines = [",".join(["subject", "t", "y"] + data.covariate_names)]
    for sid, y, x in data.subjects:
        for i in range(y.size):
            cells = [str(sid), str(i + 1), str(int(y[i]))] + [_fmt(v) for v in x[i]]
            lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_panel(path, data: PanelData) -> None:
    Path(path).write_text(format_panel(data), encoding="utf-8", newline="\n")


def _jsonable(obj: Any):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj


def dump_json(obj: Any) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def load_json(text: str) -> Any:
    return json.loads(text)


def config_hash(config: dict) -> str:
    """Content hash of a resolved config, git-blob style (sha1 over canonical JSON)."""
    body = json.dumps(_jsonable(config), sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha1(b"blob %d\0" % len(body) + body).hexdigest()


def manifest(command: str, config: dict, outputs: list[str]) -> dict:
    return {
        "command": command,
        "version": __version__,
        "config": config,
        "config_hash": config_hash(config),
        "outputs": outputs,
    }


def write_rows_csv(path, rows: list[dict]) -> None:
    if not rows:
        raise ValueError("no rows to write")
    fields = list(rows[0])
    for r in rows[1:]:
        fields += [k for k in r if k not in fields]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (_fmt(v) if isinstance(v, float) else v) for k, v in r.items()})
    Path(path).write_text(buf.getvalue(), encoding="utf-8", newline="\n")


def write_qt_csv(path, trajectories: list[tuple[str, int, np.ndarray]]) -> None:
    """Lag-state distributions as ``subject,t,state,probability`` rows.

    ``trajectories`` holds ``(subject, first_t, Q)`` with ``Q[i]`` the
    distribution at time ``first_t + i``.
    """
    rows = []
    for sid, first_t, Q in trajectories:
        for i, q in enumerate(Q):
            for state, prob in enumerate(q):
                rows.append({"subject": sid, "t": first_t + i, "state": state, "probability": float(prob)})
    write_rows_csv(path, rows)
