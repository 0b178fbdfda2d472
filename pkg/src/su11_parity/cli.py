"""Command-line front end.

Subcommands::

    su11-parity sensitivity --g 2 --r 0 --n-th 0 --phi 0 [--format json]
    su11-parity sweep --axis n_th --min 0 --max 20 --steps 50 --g 2 [--output out.csv]
    su11-parity figure fig4 [--output fig4.csv]
    su11-parity oracle-check [--g 0.1 0.3] [--cutoff 48] [--tolerance 1e-6]

Flags override values read from ``--config``, a flat JSON object whose
keys are the flag names with hyphens replaced by underscores.

Exit codes: 0 success, 1 usage, 2 numerical or domain error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import sys

import numpy as np

from . import fock, model, sweeps
from .errors import CutoffTooSmallError, Su11Error

log = logging.getLogger("su11_parity")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

#: Oracle grid used by ``oracle-check`` when no grid flags are given.
ORACLE_GRID = {
    "g": (0.1, 0.2, 0.3, 0.4, 0.5),
    "r": (0.0, 0.125, 0.25, 0.375, 0.5),
    "n_th": (0.0, 0.125, 0.25, 0.375, 0.5),
    "phi": (0.0, 0.3, 0.7, 1.2, 2.0),
}

DEFAULTS = {
    "g": None,
    "r": 0.0,
    "n_th": 0.0,
    "phi": 0.0,
    "axis": None,
    "min": None,
    "max": None,
    "steps": 200,
    "format": "csv",
    "output": None,
    "cutoff": fock.DEFAULT_CUTOFF,
    "eps_trunc": fock.DEFAULT_EPS_TRUNC,
    "tolerance": 1e-6,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p: argparse.ArgumentParser, grid: bool = False) -> None:
    nargs = "+" if grid else None
    p.add_argument("--g", type=float, nargs=nargs, default=argparse.SUPPRESS, help="OPA gain")
    p.add_argument("--r", type=float, nargs=nargs, default=argparse.SUPPRESS, help="squeezing strength")
    p.add_argument("--n-th", dest="n_th", type=float, nargs=nargs, default=argparse.SUPPRESS,
                   help="thermal photon number")
    p.add_argument("--phi", type=float, nargs=nargs, default=argparse.SUPPRESS, help="phase (rad)")
    p.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    p.add_argument("--output", metavar="PATH", default=argparse.SUPPRESS)
    p.add_argument("--config", metavar="PATH", default=argparse.SUPPRESS,
                   help="JSON file with default flag values")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="su11-parity", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("sensitivity", help="report for one working point")
    _add_common(p)

    p = sub.add_parser("sweep", help="sweep one parameter and emit CSV")
    _add_common(p)
    p.add_argument("--axis", choices=sweeps.AXES, default=argparse.SUPPRESS)
    p.add_argument("--min", type=float, default=argparse.SUPPRESS)
    p.add_argument("--max", type=float, default=argparse.SUPPRESS)
    p.add_argument("--steps", type=int, default=argparse.SUPPRESS)

    p = sub.add_parser("figure", help="regenerate one figure's data")
    p.add_argument("id", help=f"one of {', '.join(sweeps.FIGURES)}")
    p.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    p.add_argument("--output", metavar="PATH", default=argparse.SUPPRESS)
    p.add_argument("--config", metavar="PATH", default=argparse.SUPPRESS)

    p = sub.add_parser("oracle-check", help="compare closed form with the Fock-space oracle")
    _add_common(p, grid=True)
    p.add_argument("--cutoff", type=int, default=argparse.SUPPRESS)
    p.add_argument("--eps-trunc", dest="eps_trunc", type=float, default=argparse.SUPPRESS)
    p.add_argument("--tolerance", type=float, default=argparse.SUPPRESS)
    return parser


def resolve_options(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < flags."""
    opts = dict(DEFAULTS)
    if args.command == "oracle-check":
        opts.update(ORACLE_GRID)
    flags = vars(args)
    if "config" in flags:
        try:
            with open(flags["config"], encoding="utf-8") as fh:
                config = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(config, dict):
            raise UsageError("config file must hold a flat JSON object")
        unknown = set(config) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        opts.update(config)
    opts.update({k: v for k, v in flags.items() if k not in ("config", "command")})
    return opts


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    with open(output, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _config(opts: dict) -> model.InterferometerConfig:
    if opts["g"] is None:
        raise UsageError("--g is required")
    return model.InterferometerConfig(opts["g"], opts["r"], opts["n_th"], opts["phi"])


def cmd_sensitivity(opts: dict) -> int:
    report = model.build_report(_config(opts))
    record = report.as_dict()
    if opts["format"] == "json":
        text = json.dumps(sweeps.rounded(record), indent=2) + "\n"
    else:
        text = sweeps.rows_to_csv([record], header=tuple(record))
    _emit(text, opts["output"])
    return EXIT_OK


def _emit_rows(rows: list[dict], opts: dict, **meta) -> None:
    if opts["format"] == "json":
        _emit(sweeps.rows_to_json(rows, **meta), opts["output"])
    else:
        _emit(sweeps.rows_to_csv(rows), opts["output"])


def cmd_sweep(opts: dict) -> int:
    missing = [k for k in ("axis", "min", "max") if opts[k] is None]
    if missing:
        raise UsageError(f"sweep needs --{' --'.join(missing)}")
    fixed = {k: opts[k] for k in sweeps.AXES if k != opts["axis"] and opts[k] is not None}
    if opts["axis"] != "g" and "g" not in fixed:
        raise UsageError("--g is required unless sweeping g")
    spec = sweeps.SweepSpec(opts["axis"], opts["min"], opts["max"], opts["steps"], fixed)
    _emit_rows(sweeps.run_sweep(spec), opts, axis=spec.axis, fixed=fixed)
    return EXIT_OK


def cmd_figure(figure_id: str, opts: dict) -> int:
    preset = sweeps.FIGURES.get(figure_id)
    if preset is None:
        raise UsageError(f"unknown figure {figure_id!r}; choose from {', '.join(sweeps.FIGURES)}")
    rows = sweeps.run_sweep(preset.sweep)
    _emit_rows(rows, opts, figure=preset.id, axis=preset.sweep.axis, fixed=preset.sweep.fixed)
    return EXIT_OK


def oracle_rows(grid: dict, cutoff: int, eps_trunc: float, tolerance: float) -> list[dict]:
    """Run the oracle over the product grid.

    Rows that overflow the cutoff are kept with ``status = "cutoff"`` so the
    whole table is reported. Tractability errors propagate.
    """
    rows = []
    for g, r, n_th, phi in itertools.product(grid["g"], grid["r"], grid["n_th"], grid["phi"]):
        cfg = model.InterferometerConfig(g, r, n_th, phi)
        fock.check_tractable(cfg, cutoff)
        row = {"g": cfg.g, "r": cfg.r, "n_th": cfg.n_th, "phi": cfg.phi,
               "gaussian": model.parity_signal(cfg)}
        try:
            result = fock.oracle_parity_signal(cfg, cutoff, eps_trunc)
        except CutoffTooSmallError as exc:
            row.update(fock=float("nan"), discrepancy=float("nan"), loss=exc.lost,
                       status=f"cutoff: {exc.stage}")
        else:
            diff = abs(result.parity - row["gaussian"])
            row.update(fock=result.parity, discrepancy=diff, loss=result.total_loss,
                       status="pass" if diff < tolerance else "fail")
        rows.append(row)
    return rows


def cmd_oracle_check(opts: dict) -> int:
    grid = {name: tuple(np.atleast_1d(opts[name]).astype(float)) for name in sweeps.AXES}
    rows = oracle_rows(grid, opts["cutoff"], opts["eps_trunc"], opts["tolerance"])
    header = ("g", "r", "n_th", "phi", "gaussian", "fock", "discrepancy", "loss", "status")
    if opts["format"] == "json":
        _emit(sweeps.rows_to_json(rows, cutoff=opts["cutoff"], eps_trunc=opts["eps_trunc"],
                                  tolerance=opts["tolerance"]), opts["output"])
    else:
        _emit(sweeps.rows_to_csv(rows, header=header), opts["output"])
    failed = [r for r in rows if r["status"] != "pass"]
    if failed:
        log.error("%d of %d grid points failed", len(failed), len(rows))
        return EXIT_NUMERIC
    log.info("all %d grid points agree within %g", len(rows), opts["tolerance"])
    return EXIT_OK


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        opts = resolve_options(args)
        if args.command == "oracle-check":
            return cmd_oracle_check(opts)
        if args.command == "sensitivity":
            return cmd_sensitivity(opts)
        if args.command == "sweep":
            return cmd_sweep(opts)
        return cmd_figure(args.id, opts)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"su11-parity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"su11-parity: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Su11Error as exc:
        print(f"su11-parity: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main(argv=None) -> None:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s", stream=sys.stderr)
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
