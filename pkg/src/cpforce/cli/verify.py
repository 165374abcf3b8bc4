"""
Self-verification suites behind ``cpforce verify``.

* ``oracle``: generic solver, term-by-term series and closed form agree for an ideal metal with frequency-independent
  response.
* ``limits``: zero-temperature and classical limits of the atom-wall force and the classical plate-plate limit.
* ``rarefaction``: dilute-gas plate free energy against the integrated atom-wall free energy.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

from ..exceptions import NonConvergenceError
from ..models.atoms import ResponseMode, atom_preset, static_susceptibility
from ..models.materials import wall_preset
from ..numerics.spectral import SpectralContext
from ..physics.casimir_polder import (
    SolverOptions,
    classical_limit,
    cp_force,
    ideal_metal_series_force,
    ideal_metal_static_force,
    zero_temperature_limit,
)
from ..physics.plates import plate_classical_limit, plate_free_energy, rarefaction_check
from ..units import CONSTANTS

ORACLE_TOL = 1e-9
ZERO_T_CLOSED_TOL = 1e-12
ZERO_T_TOL = 1e-3
CLASSICAL_TOL = 1e-6

# (T in K, a in cm)
ORACLE_POINTS: tuple[tuple[float, float], ...] = ((1.0, 1e-4), (1.0, 5e-4), (1.0, 1e-3), (300.0, 1e-4))
RAREFACTION_DENSITIES: tuple[float, ...] = (1e12, 1e11, 1e10)  # cm^-3

_logger = logging.getLogger(__name__)


class Suite(StrEnum):
    Oracle = "oracle"
    Limits = "limits"
    Rarefaction = "rarefaction"


@dataclass(frozen=True, slots=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    expected: float
    rel_error: float
    tolerance: float
    details: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "value": self.value,
            "expected": self.expected,
            "rel_error": self.rel_error,
            "tolerance": self.tolerance,
            "details": self.details,
        }


@dataclass(frozen=True, slots=True)
class VerifyReport:
    suite: Suite
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def as_dict(self) -> dict[str, Any]:
        return {"suite": str(self.suite), "passed": self.passed, "checks": [check.as_dict() for check in self.checks]}


def _relative(value: float, expected: float) -> float:
    if expected == 0:
        return 0.0 if value == 0 else math.inf
    return abs(value - expected) / abs(expected)


def _compare(name: str, value: float, expected: float, tolerance: float, **details: Any) -> CheckResult:
    rel_error = _relative(value, expected)
    passed = rel_error < tolerance and details.get("converged", True)
    _logger.info("check %s rel_error=%.3e tolerance=%.1e passed=%s", name, rel_error, tolerance, passed)
    return CheckResult(name, passed, value, expected, rel_error, tolerance, details)


def _solve(compute: Callable[[], Any]) -> tuple[Any, bool]:
    """Runs a solver, returning its partial result instead of raising when it does not converge."""
    try:
        return compute(), True
    except NonConvergenceError as e:
        return e.partial, False


def verify_oracle() -> VerifyReport:
    """Closed form, series and generic solver for H near an ideal metal, pairwise within :data:`ORACLE_TOL`."""
    atom = atom_preset("H")
    wall = wall_preset("ideal-metal")
    opts = SolverOptions(response=ResponseMode.Static)
    checks: list[CheckResult] = []

    for T, a in ORACLE_POINTS:
        beta0 = static_susceptibility(atom, T)
        closed = ideal_metal_static_force(atom.alpha0, beta0, a, T)
        series, series_ok = _solve(lambda: ideal_metal_series_force(atom.alpha0, beta0, a, T))
        generic, generic_ok = _solve(lambda: cp_force(atom, wall, a, T, opts))
        label = f"T={T:g}K a={a:g}cm"
        checks.append(_compare(f"series-vs-closed {label}", series, closed, ORACLE_TOL, converged=series_ok))
        checks.append(
            _compare(f"generic-vs-closed {label}", generic.f_total, closed, ORACLE_TOL, converged=generic_ok)
        )
        checks.append(
            _compare(
                f"generic-vs-series {label}",
                generic.f_total,
                series,
                ORACLE_TOL,
                converged=generic_ok and series_ok,
                terms_used=generic.report.terms_used,
            )
        )
    return VerifyReport(Suite.Oracle, tuple(checks))


def verify_limits() -> VerifyReport:
    atom = atom_preset("H")
    wall = wall_preset("ideal-metal")
    checks: list[CheckResult] = []

    # closed form at tau_norm = 1e-4
    a = 1e-4
    T = 1e-4 * CONSTANTS.hbar * CONSTANTS.c / (4.0 * math.pi * a * CONSTANTS.k_B)
    checks.append(
        _compare(
            "zero-temperature closed form",
            ideal_metal_static_force(atom.alpha0, 0.0, a, T),
            zero_temperature_limit(atom.alpha0, a),
            ZERO_T_CLOSED_TOL,
            tau_norm=SpectralContext(a, T).tau_norm,
        )
    )

    # generic solver at tau_norm below 5e-3, alpha only
    a, T = 1e-4, 0.9
    opts = SolverOptions(response=ResponseMode.Static, include_beta=False)
    result, converged = _solve(lambda: cp_force(atom, wall, a, T, opts))
    checks.append(
        _compare(
            "zero-temperature generic",
            result.f_total,
            zero_temperature_limit(atom.alpha0, a),
            ZERO_T_TOL,
            converged=converged,
            tau_norm=SpectralContext(a, T).tau_norm,
        )
    )

    # tau_norm about 33
    a, T = 20e-4, 300.0
    opts = SolverOptions(response=ResponseMode.Static)
    result, converged = _solve(lambda: cp_force(atom, wall, a, T, opts))
    checks.append(
        _compare(
            "classical generic",
            result.f_total,
            classical_limit(atom.alpha0, static_susceptibility(atom, T), a, T),
            CLASSICAL_TOL,
            converged=converged,
            tau_norm=SpectralContext(a, T).tau_norm,
        )
    )

    value, converged = _solve(lambda: plate_free_energy(wall, wall, a, T))
    checks.append(
        _compare("plate classical", value, plate_classical_limit(a, T), CLASSICAL_TOL, converged=converged)
    )
    return VerifyReport(Suite.Limits, tuple(checks))


def verify_rarefaction(quick: bool = False) -> VerifyReport:
    """
    Rarefaction check for H at 1 um and 1 K against the ideal metal and the ferromagnetic dielectric.

    ``quick`` uses two densities and looser tolerances and skips the electric-only case.
    """
    atom = atom_preset("H")
    a, T = 1e-4, 1.0
    if quick:
        densities = RAREFACTION_DENSITIES[:2]
        base = SolverOptions(sum_rel_tol=1e-10, quad_rel_tol=1e-10)
    else:
        densities = RAREFACTION_DENSITIES
        base = SolverOptions()

    cases = [("ideal-metal", base), ("ferro-dielectric", base)]
    if not quick:
        cases.append(("ideal-metal", SolverOptions(include_beta=False)))

    checks: list[CheckResult] = []
    for wall_name, opts in cases:
        report = rarefaction_check(atom, wall_preset(wall_name), a, T, densities, opts)
        suffix = "" if opts.include_beta else " alpha-only"
        checks.append(
            CheckResult(
                name=f"rarefaction {atom.name}/{wall_name}{suffix}",
                passed=report.passed,
                value=report.extrapolated,
                expected=report.atom_integral.value,
                rel_error=report.mismatch,
                tolerance=report.tolerance,
                details=report.as_dict(),
            )
        )
    return VerifyReport(Suite.Rarefaction, tuple(checks))


def run_suite(suite: Suite, quick: bool = False) -> VerifyReport:
    match suite:
        case Suite.Oracle:
            return verify_oracle()
        case Suite.Limits:
            return verify_limits()
        case Suite.Rarefaction:
            return verify_rarefaction(quick)


__all__ = [
    "ORACLE_TOL",
    "ORACLE_POINTS",
    "RAREFACTION_DENSITIES",
    "Suite",
    "CheckResult",
    "VerifyReport",
    "verify_oracle",
    "verify_limits",
    "verify_rarefaction",
    "run_suite",
]
