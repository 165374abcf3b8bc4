"""
``cpforce`` command line.

Subcommands: ``sweep``, ``deviations``, ``verify {oracle,limits,rarefaction}`` and ``presets``. Exit status is 0 on
success, 1 when a point failed to converge or a check failed, and 2 for invalid input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from collections.abc import Mapping, Sequence
from dataclasses import replace
from pathlib import Path
from typing import Any, Optional

from ..exceptions import CasimirPolderError, ConfigError, DomainError
from ..models.atoms import ATOM_PRESETS, ATOM_PROVENANCE, AtomModel, ResponseMode, atom_preset
from ..models.materials import WALL_PRESETS, WALL_PROVENANCE, MuMode, WallModel, wall_preset, with_mu_mode
from ..numerics.spectral import DEFAULT_L_MAX, DEFAULT_QUAD_REL_TOL, DEFAULT_SUM_REL_TOL
from .config import Config, load_config
from .emit import OutputFormat, emit, package_version
from .sweep import DEFAULT_POINTS, Spacing, SweepMode, SweepSpec, deviation_table, run_sweep
from .verify import Suite, run_suite

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

_logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpforce", description="Thermal Casimir-Polder force on magnetic atoms")
    parser.add_argument("--version", action="version", version=f"%(prog)s {package_version()}")
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level for messages on stderr",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    sweep = commands.add_parser("sweep", help="Force over a range of separations")
    sweep.add_argument("--config", type=Path, help="TOML configuration file; flags override its values")
    sweep.add_argument("--atom", choices=sorted(ATOM_PRESETS), help="Atom preset")
    sweep.add_argument("--tau-rel-s", type=float, help="Relaxation time of the magnetic susceptibility, s")
    sweep.add_argument("--wall", choices=sorted(WALL_PRESETS), help="Wall preset")
    sweep.add_argument("--mu-mode", choices=[str(mode) for mode in MuMode], help="Permeability convention")
    sweep.add_argument("--temp-k", type=float, help="Temperature, K")
    sweep.add_argument("--a-min-m", type=float, help="Smallest separation, m")
    sweep.add_argument("--a-max-m", type=float, help="Largest separation, m")
    sweep.add_argument("--points", type=int, help=f"Number of separations (default {DEFAULT_POINTS})")
    sweep.add_argument("--spacing", choices=[str(s) for s in Spacing], help="Grid spacing (default log)")
    sweep.add_argument("--mode", choices=[str(m) for m in SweepMode], help="Computation mode (default full)")
    _add_tolerances(sweep)
    sweep.add_argument("--workers", type=int, help="Worker processes (default $CPFORCE_WORKERS or 1)")
    sweep.add_argument("--out", type=Path, help="Output file (default stdout)")
    sweep.add_argument("--format", choices=[str(f) for f in OutputFormat], help="Output format (default from --out)")

    deviations = commands.add_parser("deviations", help="Magnetic deviation table for the preset walls")
    deviations.add_argument("--atom", choices=sorted(ATOM_PRESETS), default="H", help="Atom preset")
    deviations.add_argument("--temp-k", type=float, default=1.0, help="Temperature, K")
    deviations.add_argument(
        "--a-m", type=float, nargs="+", default=[1e-6, 1e-5], help="Separations, m (default 1e-6 1e-5)"
    )
    deviations.add_argument(
        "--response",
        choices=[str(r) for r in ResponseMode],
        nargs="+",
        default=[str(ResponseMode.Dynamic)],
        help="Atomic response model(s)",
    )

    verify = commands.add_parser("verify", help="Run a self-verification suite")
    verify.add_argument("suite", choices=[str(s) for s in Suite])
    verify.add_argument("--quick", action="store_true", help="Reduced rarefaction check")
    verify.add_argument("--out", type=Path, help="Report file (default stdout)")

    commands.add_parser("presets", help="List atom and wall presets")
    return parser


def _add_tolerances(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--sum-rel-tol", type=float, help="Relative truncation tolerance of the Matsubara sum")
    parser.add_argument("--quad-rel-tol", type=float, help="Relative tolerance of the quadrature")
    parser.add_argument("--l-max", type=int, help="Largest Matsubara index")


def _pick(flag: Any, table: Mapping[str, Any], key: str, kind: type, default: Any = None) -> Any:
    if flag is not None:
        value = flag
    elif key in table:
        value = table[key]
    else:
        return default
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{key} must be an integer, got {value!r}")
        return value
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key} must be a number, got {value!r}")
        return float(value)
    try:
        return kind(value)
    except ValueError:
        raise ConfigError(f"invalid {key} {value!r}") from None


def _resolve_atom(args: argparse.Namespace, config: Config) -> AtomModel:
    if args.atom is not None:
        return atom_preset(args.atom, tau_rel=args.tau_rel_s)
    if config.atom is None:
        raise ConfigError("no atom given: use --atom or an [atom] table")
    return config.atom if args.tau_rel_s is None else replace(config.atom, tau_rel=args.tau_rel_s)


def _resolve_wall(args: argparse.Namespace, config: Config) -> WallModel:
    if args.wall is not None:
        wall = wall_preset(args.wall)
    elif config.wall is not None:
        wall = config.wall
    else:
        raise ConfigError("no wall given: use --wall or a [wall] table")
    return wall if args.mu_mode is None else with_mu_mode(wall, MuMode(args.mu_mode))


def sweep_spec_from_args(args: argparse.Namespace) -> SweepSpec:
    """Merges the config file (if any) with command-line flags, flags taking precedence."""
    config = load_config(args.config) if args.config is not None else Config()
    sweep, tolerances = config.sweep, config.tolerances

    values = {
        "temp_k": _pick(args.temp_k, sweep, "temp_k", float),
        "a_min_m": _pick(args.a_min_m, sweep, "a_min_m", float),
        "a_max_m": _pick(args.a_max_m, sweep, "a_max_m", float),
    }
    missing = [key for key, value in values.items() if value is None]
    if missing:
        raise ConfigError(f"missing sweep parameter(s): {', '.join(missing)}")

    try:
        return SweepSpec(
            atom=_resolve_atom(args, config),
            wall=_resolve_wall(args, config),
            points=_pick(args.points, sweep, "points", int, DEFAULT_POINTS),
            spacing=_pick(args.spacing, sweep, "spacing", Spacing, Spacing.Log),
            mode=_pick(args.mode, sweep, "mode", SweepMode, SweepMode.Full),
            sum_rel_tol=_pick(args.sum_rel_tol, tolerances, "sum_rel_tol", float, DEFAULT_SUM_REL_TOL),
            quad_rel_tol=_pick(args.quad_rel_tol, tolerances, "quad_rel_tol", float, DEFAULT_QUAD_REL_TOL),
            l_max=_pick(args.l_max, tolerances, "l_max", int, DEFAULT_L_MAX),
            **values,
        )
    except DomainError as e:
        raise ConfigError(str(e)) from e


def _write_json(document: Any, out: Optional[Path]) -> None:
    text = json.dumps(document, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")


def command_sweep(args: argparse.Namespace) -> int:
    spec = sweep_spec_from_args(args)
    fmt = OutputFormat(args.format) if args.format else OutputFormat.for_path(args.out)

    started = time.perf_counter()
    rows = run_sweep(spec, args.workers)
    elapsed = time.perf_counter() - started

    emit(rows, fmt, args.out, spec=spec, elapsed=elapsed)
    failed = [row.a_m for row in rows if not row.converged]
    if failed:
        _logger.error("%d sweep point(s) did not converge: %s", len(failed), ", ".join(f"{a:g}" for a in failed))
        return EXIT_FAILED
    return EXIT_OK


def command_deviations(args: argparse.Namespace) -> int:
    atom = atom_preset(args.atom)
    rows = []
    for response in args.response:
        rows.extend(deviation_table(atom, args.temp_k, tuple(args.a_m), ResponseMode(response)))
    _write_json([row.as_dict() for row in rows], None)
    return EXIT_OK if all(row.converged for row in rows) else EXIT_FAILED


def command_verify(args: argparse.Namespace) -> int:
    report = run_suite(Suite(args.suite), quick=args.quick)
    _write_json(report.as_dict(), args.out)
    if not report.passed:
        failed = [check.name for check in report.checks if not check.passed]
        _logger.error("verify %s failed: %s", args.suite, "; ".join(failed))
        return EXIT_FAILED
    return EXIT_OK


def command_presets(args: argparse.Namespace) -> int:
    document = {
        "atoms": {
            name: {**atom.describe(), "provenance": ATOM_PROVENANCE[name]} for name, atom in ATOM_PRESETS.items()
        },
        "walls": {
            name: {**wall.describe(), "provenance": WALL_PROVENANCE[name]} for name, wall in WALL_PRESETS.items()
        },
    }
    _write_json(document, None)
    return EXIT_OK


COMMANDS = {
    "sweep": command_sweep,
    "deviations": command_deviations,
    "verify": command_verify,
    "presets": command_presets,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        _logger.error("invalid input: %s", e)
        return EXIT_USAGE
    except CasimirPolderError as e:
        _logger.error("%s: %s", type(e).__name__, e)
        return EXIT_FAILED
    except OSError as e:
        _logger.error("I/O error: %s", e)
        return EXIT_FAILED


__all__ = ["EXIT_OK", "EXIT_FAILED", "EXIT_USAGE", "build_parser", "sweep_spec_from_args", "main"]
