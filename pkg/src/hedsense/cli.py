"""Command-line front end.

    hedsense <scenario> [--config PATH] [--out PATH] [--preset fig3|hed|nonhed|regular]

Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__, export
from .config import PRESETS, SCENARIOS, ConfigError, parse_config
from .laurent import PoleOrderError
from .survey import run_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

log = logging.getLogger("hedsense")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hedsense", description=__doc__.split("\n\n")[0])
    p.add_argument("scenario", choices=SCENARIOS)
    p.add_argument("--config", type=Path, help="key = value configuration file")
    p.add_argument("--out", type=Path, help="output file (default: stdout)")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--format", choices=("csv", "structured"))
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _summary(report) -> str:
    lines = []
    if report.classification is not None:
        lines.append(f"class: {report.classification.kind}")
    if report.expansion is not None:
        lines.append(f"pole order: {report.expansion.pole_order}")
    for which, f in report.fits.items():
        lines.append(f"{which} slope: {f.slope:.4f} (r^2={f.r_squared:.5f})")
    a = report.asymptotics
    if a is not None:
        for k in ("a0", "b0", "c0"):
            if getattr(a, k) is not None:
                lines.append(f"{k}: {getattr(a, k):.6g}")
    lines.extend(f"note: {d}" for d in report.diagnostics)
    return "\n".join(lines)


def _sidecar(out: Path, argv, cfg):
    meta = {
        "tool": "hedsense",
        "version": __version__,
        "argv": list(argv),
        "written": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "config": cfg.echo(),
    }
    out.with_name(out.name + ".meta.json").write_text(json.dumps(meta, indent=2) + "\n")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        text = args.config.read_text() if args.config else ""
    except OSError as exc:
        print(f"error: cannot read config {args.config}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    try:
        cfg = parse_config(text, scenario=args.scenario, preset=args.preset,
                           output_format=args.format)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        with np.errstate(all="ignore"):
            report = run_scenario(cfg)
    except (ArithmeticError, PoleOrderError, np.linalg.LinAlgError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if cfg.scenario == "expand" and report.expansion is None:
        print("numerical failure: " + "; ".join(report.diagnostics), file=sys.stderr)
        return EXIT_NUMERIC

    out = args.out or (Path(cfg.output) if cfg.output else None)
    if cfg.scenario == "expand":
        body = export._dumps(export.expansion_dict(report.expansion))
    elif cfg.format == "csv":
        body = export.csv_text(report)
    else:
        body = export.structured_text(report)
    try:
        if out is None:
            sys.stdout.write(body)
        else:
            out.write_text(body)
            _sidecar(out, argv, cfg)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    summary = _summary(report)
    if summary:
        print(summary, file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
