"""
Separation sweeps of the Casimir-Polder force.

Each separation is solved independently, either inline or in a process pool driven from asyncio. Rows are returned in
ascending separation whatever the completion order, so output is identical for any worker count.
"""

from __future__ import annotations

import asyncio
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import StrEnum
from typing import Any, ClassVar, Optional

import numpy as np

from ..exceptions import ConfigError, DomainError, NonConvergenceError
from ..models.atoms import AtomModel, ResponseMode
from ..models.materials import MuMode, WallModel, wall_preset, with_mu_mode
from ..numerics.spectral import DEFAULT_L_MAX, DEFAULT_QUAD_REL_TOL, DEFAULT_SUM_REL_TOL
from ..physics.casimir_polder import ForceResult, SolverOptions, cp_force
from ..units import dyn_to_newton, meters_to_cm

DEFAULT_POINTS = 19
WORKERS_ENV = "CPFORCE_WORKERS"

DEVIATION_WALLS: tuple[str, ...] = ("ideal-metal", "au-plasma", "fe-plasma", "ferro-dielectric")
DEVIATION_SEPARATIONS_M: tuple[float, ...] = (1e-6, 1e-5)

_logger = logging.getLogger(__name__)


class SweepMode(StrEnum):
    Full = "full"
    AlphaOnly = "alpha_only"
    StaticModel = "static_model"


class Spacing(StrEnum):
    Linear = "linear"
    Log = "log"


@dataclass(frozen=True, slots=True)
class SweepSpec:
    """
    A force sweep over separations [a_min_m, a_max_m] (meters) at temperature temp_k (kelvin).

    ``mode`` selects the full computation, the electric part alone (beta forced to zero) or frequency-independent
    alpha(0) and beta(0).
    """

    atom: AtomModel
    wall: WallModel
    temp_k: float
    a_min_m: float
    a_max_m: float
    points: int = DEFAULT_POINTS
    spacing: Spacing = Spacing.Log
    mode: SweepMode = SweepMode.Full
    sum_rel_tol: float = DEFAULT_SUM_REL_TOL
    quad_rel_tol: float = DEFAULT_QUAD_REL_TOL
    l_max: int = DEFAULT_L_MAX

    def __post_init__(self) -> None:
        if not (math.isfinite(self.temp_k) and self.temp_k > 0):
            raise DomainError(f"temperature must be positive, got {self.temp_k!r}")
        if not (math.isfinite(self.a_min_m) and self.a_min_m > 0 and math.isfinite(self.a_max_m)):
            raise DomainError(f"separations must be positive and finite, got [{self.a_min_m!r}, {self.a_max_m!r}]")
        if not self.a_min_m < self.a_max_m:
            raise DomainError(f"a_min_m must be below a_max_m, got [{self.a_min_m!r}, {self.a_max_m!r}]")
        if isinstance(self.points, bool) or not isinstance(self.points, int) or self.points < 2:
            raise DomainError(f"a sweep needs at least 2 points, got {self.points!r}")
        # validates the tolerances
        self.solver_options()

    def separations_m(self) -> np.ndarray:
        if self.spacing == Spacing.Log:
            values = np.geomspace(self.a_min_m, self.a_max_m, self.points)
        else:
            values = np.linspace(self.a_min_m, self.a_max_m, self.points)
        values[0], values[-1] = self.a_min_m, self.a_max_m
        return values

    def solver_options(self) -> SolverOptions:
        return SolverOptions(
            sum_rel_tol=self.sum_rel_tol,
            quad_rel_tol=self.quad_rel_tol,
            l_max=self.l_max,
            response=ResponseMode.Static if self.mode == SweepMode.StaticModel else ResponseMode.Dynamic,
            include_beta=self.mode != SweepMode.AlphaOnly,
        )

    def describe(self) -> dict[str, Any]:
        """Plain echo of the sweep for output metadata."""
        return {
            "atom": self.atom.describe(),
            "wall": self.wall.describe(),
            "temp_k": self.temp_k,
            "a_min_m": self.a_min_m,
            "a_max_m": self.a_max_m,
            "points": self.points,
            "spacing": str(self.spacing),
            "mode": str(self.mode),
            "sum_rel_tol": self.sum_rel_tol,
            "quad_rel_tol": self.quad_rel_tol,
            "l_max": self.l_max,
        }


@dataclass(frozen=True, slots=True)
class SweepRow:
    """One sweep point in SI units; ``a5_abs_f`` is a_m^5 |f_total_N| in N m^5."""

    FIELDS: ClassVar[tuple[str, ...]] = (
        "a_m",
        "f_total_N",
        "f_alpha_N",
        "f_beta_N",
        "a5_abs_f",
        "deviation_pct",
        "terms_l",
        "est_rel_err",
    )

    a_m: float
    f_total_N: float
    f_alpha_N: float
    f_beta_N: float
    a5_abs_f: float
    deviation_pct: float
    terms_l: int
    est_rel_err: float
    converged: bool = True

    @classmethod
    def from_result(cls, a_m: float, result: ForceResult, converged: bool = True) -> "SweepRow":
        f_total = float(dyn_to_newton(result.f_total))
        report = result.report
        return cls(
            a_m=a_m,
            f_total_N=f_total,
            f_alpha_N=float(dyn_to_newton(result.f_alpha)),
            f_beta_N=float(dyn_to_newton(result.f_beta)),
            a5_abs_f=a_m**5 * abs(f_total),
            deviation_pct=result.deviation_pct,
            terms_l=report.terms_used,
            est_rel_err=report.last_term_ratio + report.quad_error_estimate,
            converged=converged,
        )


def sweep_point(spec: SweepSpec, a_m: float) -> SweepRow:
    """Solves one separation; a non-converged solve yields its partial result flagged ``converged=False``."""
    try:
        result = cp_force(spec.atom, spec.wall, float(meters_to_cm(a_m)), spec.temp_k, spec.solver_options())
    except NonConvergenceError as e:
        _logger.warning("sweep point a=%g m did not converge: %s", a_m, e)
        return SweepRow.from_result(a_m, e.partial, converged=False)
    return SweepRow.from_result(a_m, result)


def resolve_workers(workers: Optional[int] = None) -> int:
    """Worker count from the argument, else from ``CPFORCE_WORKERS``, else 1."""
    if workers is None:
        raw = os.environ.get(WORKERS_ENV, "1")
        try:
            workers = int(raw)
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if workers < 1:
        raise ConfigError(f"worker count must be >= 1, got {workers!r}")
    return workers


async def run_sweep_async(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    separations = [float(a) for a in spec.separations_m()]
    _logger.info(
        "sweep atom=%s wall=%s T=%g points=%d mode=%s workers=%d",
        spec.atom.name,
        spec.wall.name,
        spec.temp_k,
        spec.points,
        spec.mode,
        workers,
    )
    if workers == 1:
        return [sweep_point(spec, a) for a in separations]

    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        tasks = [loop.run_in_executor(pool, sweep_point, spec, a) for a in separations]
        rows = await asyncio.gather(*tasks)
    return sorted(rows, key=lambda row: row.a_m)


def run_sweep(spec: SweepSpec, workers: Optional[int] = None) -> list[SweepRow]:
    """Runs the sweep and returns one row per separation in ascending order."""
    return asyncio.run(run_sweep_async(spec, resolve_workers(workers)))


@dataclass(frozen=True, slots=True)
class DeviationRow:
    atom: str
    wall: str
    mu_mode: str
    response: str
    a_m: float
    deviation_pct: float
    converged: bool

    def as_dict(self) -> dict[str, Any]:
        return {
            "atom": self.atom,
            "wall": self.wall,
            "mu_mode": self.mu_mode,
            "response": self.response,
            "a_m": self.a_m,
            "deviation_pct": self.deviation_pct,
            "converged": self.converged,
        }


def deviation_table(
    atom: AtomModel,
    temp_k: float = 1.0,
    separations_m: tuple[float, ...] = DEVIATION_SEPARATIONS_M,
    response: ResponseMode = ResponseMode.Dynamic,
    walls: tuple[str, ...] = DEVIATION_WALLS,
) -> list[DeviationRow]:
    """
    Magnetic deviation of the force for each preset wall, with ferromagnetic walls run under both conventions for
    the permeability at nonzero Matsubara frequencies.
    """
    rows: list[DeviationRow] = []
    opts = SolverOptions(response=response)
    for name in walls:
        base = wall_preset(name)
        variants = [(with_mu_mode(base, mode), str(mode)) for mode in MuMode] if base.is_magnetic else [(base, "")]
        for wall, mu_mode in variants:
            for a_m in separations_m:
                try:
                    result, converged = cp_force(atom, wall, float(meters_to_cm(a_m)), temp_k, opts), True
                except NonConvergenceError as e:
                    _logger.warning("deviation wall=%s a=%g m did not converge", wall.name, a_m)
                    result, converged = e.partial, False
                rows.append(
                    DeviationRow(atom.name, wall.name, mu_mode, str(response), a_m, result.deviation_pct, converged)
                )
    return rows


__all__ = [
    "DEFAULT_POINTS",
    "WORKERS_ENV",
    "SweepMode",
    "Spacing",
    "SweepSpec",
    "SweepRow",
    "sweep_point",
    "resolve_workers",
    "run_sweep_async",
    "run_sweep",
    "DEVIATION_WALLS",
    "DEVIATION_SEPARATIONS_M",
    "DeviationRow",
    "deviation_table",
]
