"""Writers for scenario results: CSV tables and JSON documents.

Data files carry no timestamps, so identical configurations give identical
bytes. Provenance goes to a ``.meta.json`` sidecar written by the CLI.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .laurent import LaurentExpansion
from .survey import ScenarioReport

FISHER_COLUMNS = ("theta", "qfi", "cfi", "dq_error", "dc_error")
SWEEP_COLUMNS = ("g", "J", "class", "abs_det")


def fmt(x: float) -> str:
    """Scientific notation with enough digits to round-trip a double."""
    return format(float(x), ".17e")


def fisher_rows(report: ScenarioReport):
    for s in sorted(report.samples, key=lambda s: s.theta):
        yield [fmt(s.theta), fmt(s.qfi), fmt(s.cfi), fmt(s.dq_error), fmt(s.dc_error)]


def sweep_rows(report: ScenarioReport):
    for c in report.cells:
        yield [fmt(c.g), fmt(c.J), c.kind, fmt(c.abs_det)]


def csv_text(report: ScenarioReport) -> str:
    scenario = report.config.get("scenario")
    if scenario in ("fisher", "scaling"):
        header, rows = FISHER_COLUMNS, fisher_rows(report)
    elif scenario == "sweep":
        header, rows = SWEEP_COLUMNS, sweep_rows(report)
    else:
        raise ValueError(f"no CSV layout for scenario {scenario!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write(path, text: str):
    path = Path(path)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def emit_csv(report: ScenarioReport, path) -> None:
    _write(path, csv_text(report))


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def expansion_dict(exp: LaurentExpansion) -> dict:
    return {
        "pole_order": exp.pole_order,
        "truncation_order": exp.truncation_order,
        "dimension": exp.dim,
        "coefficients": [[float(v) for v in X.ravel(order="C")] for X in exp.coefficients],
    }


def expansion_from_dict(doc: dict) -> tuple[int, list[np.ndarray]]:
    n = doc["dimension"]
    return doc["pole_order"], [np.asarray(c, float).reshape(n, n) for c in doc["coefficients"]]


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def emit_expansion(exp: LaurentExpansion, path) -> None:
    _write(path, _dumps(expansion_dict(exp)))


def report_dict(report: ScenarioReport) -> dict:
    doc: dict = {"config": report.config, "diagnostics": list(report.diagnostics)}
    c = report.classification
    if c is not None:
        doc["classification"] = {
            "kind": c.kind, "tol": c.tol,
            "surface_distance": c.surface_distance,
            "exceptional_distance": c.exceptional_distance,
            "diabolic_distance": c.diabolic_distance,
        }
    if report.expansion is not None:
        doc["expansion"] = expansion_dict(report.expansion)
    if report.samples:
        doc["samples"] = [dict(zip(FISHER_COLUMNS, (s.theta, s.qfi, s.cfi, s.dq_error, s.dc_error)))
                          for s in report.samples]
    if report.fits:
        doc["fits"] = {k: {"slope": f.slope, "intercept": f.intercept,
                           "r_squared": f.r_squared, "theta_range": list(f.theta_range),
                           "n_points": f.n_points}
                       for k, f in report.fits.items()}
    a = report.asymptotics
    if a is not None:
        doc["asymptotics"] = {k: getattr(a, k) for k in ("a0", "b0", "c0")
                              if getattr(a, k) is not None}
    if report.cells:
        doc["cells"] = [{"g": c.g, "J": c.J, "class": c.kind, "abs_det": c.abs_det}
                        for c in report.cells]
    return doc


def emit_structured(report: ScenarioReport, path) -> None:
    _write(path, _dumps(report_dict(report)))


def structured_text(report: ScenarioReport) -> str:
    return _dumps(report_dict(report))
