"""
Casimir-Polder free energy and force between an atom and a thick wall at temperature T.

In the dimensionless variables of :mod:`cpforce.numerics.spectral` the force reads

    F = -(k_B T / 8 a^4) sum'_l int_{zeta_l}^inf dy y e^-y {2 y^2 [alpha r_TM + beta r_TE]
                                                           - zeta_l^2 (alpha + beta) (r_TM + r_TE)}

with alpha, beta evaluated at xi_l = omega_c zeta_l. The free energy has the same kernel with one power of y fewer and
the prefactor -(k_B T / 8 a^3). The alpha- and beta-proportional parts are accumulated separately.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from ..exceptions import ContractError, DomainError, NonConvergenceError
from ..models.atoms import AtomModel, ResponseMode, magnetic_susceptibility_at, polarizability_at
from ..models.materials import WallModel
from ..numerics.spectral import (
    DEFAULT_L_MAX,
    DEFAULT_QUAD_REL_TOL,
    DEFAULT_SUM_REL_TOL,
    ConvergenceReport,
    SpectralContext,
    integrate_tail,
    matsubara_frequency,
    primed_sum,
)
from ..units import CONSTANTS
from ..utils import require_non_negative, require_positive
from .reflection import wall_response

# validity window of the single-oscillator and Curie-law models
GUARD_A_MIN = 0.5e-4  # cm
GUARD_A_MAX = 20.0e-4  # cm
GUARD_T_MIN = 0.5  # K
GUARD_T_MAX = 400.0  # K

# below this normalized temperature the closed-form bracket is replaced by its expansion
STATIC_SERIES_THRESHOLD = 1e-3

# quadrature runs this much tighter than the tolerance it reports against
QUAD_SAFETY = 0.1

_logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class SolverOptions:
    """
    Tolerances and model switches shared by every solver.

    :param response: dynamic or static atomic response
    :param include_beta: when false the magnetic susceptibility is forced to zero
    """

    sum_rel_tol: float = DEFAULT_SUM_REL_TOL
    quad_rel_tol: float = DEFAULT_QUAD_REL_TOL
    l_max: int = DEFAULT_L_MAX
    response: ResponseMode = ResponseMode.Dynamic
    include_beta: bool = True

    def __post_init__(self) -> None:
        require_positive("sum_rel_tol", self.sum_rel_tol)
        require_positive("quad_rel_tol", self.quad_rel_tol)
        if self.l_max < 0:
            raise DomainError(f"l_max must be >= 0, got {self.l_max!r}")


def relative_deviation_pct(part_alpha: float, part_beta: float) -> float:
    """100 (|alpha part + beta part| - |alpha part|) / |alpha part|, evaluated without differencing the totals."""
    if part_alpha == 0:
        raise DomainError("relative deviation undefined for a vanishing alpha contribution")
    total = part_alpha + part_beta
    if math.copysign(1.0, total) == math.copysign(1.0, part_alpha):
        return 100.0 * math.copysign(1.0, part_alpha) * part_beta / abs(part_alpha)
    return 100.0 * (abs(total) - abs(part_alpha)) / abs(part_alpha)


@dataclass(frozen=True, slots=True)
class ForceResult:
    """Force in dyn; negative values attract the atom to the wall."""

    f_total: float
    f_alpha: float
    f_beta: float
    report: ConvergenceReport

    @classmethod
    def from_parts(cls, f_alpha: float, f_beta: float, report: ConvergenceReport) -> "ForceResult":
        return cls(f_alpha + f_beta, f_alpha, f_beta, report)

    @property
    def deviation_pct(self) -> float:
        """Relative change of |F| caused by the magnetic moment, in percent."""
        return relative_deviation_pct(self.f_alpha, self.f_beta)


@dataclass(frozen=True, slots=True)
class FreeEnergyResult:
    """Free energy in erg."""

    fe_total: float
    fe_alpha: float
    fe_beta: float
    report: ConvergenceReport

    @classmethod
    def from_parts(cls, fe_alpha: float, fe_beta: float, report: ConvergenceReport) -> "FreeEnergyResult":
        return cls(fe_alpha + fe_beta, fe_alpha, fe_beta, report)


@dataclass(frozen=True, slots=True)
class ForceTerms:
    """Per-index contributions to the force, l = 0 already halved; summing them gives the force."""

    l: np.ndarray
    f_alpha: np.ndarray
    f_beta: np.ndarray

    @property
    def f_total(self) -> np.ndarray:
        return self.f_alpha + self.f_beta


class _KernelTerms:
    """
    Matsubara terms (alpha_l K_alpha(l), beta_l K_beta(l)) for the force (``power=1``) or free energy (``power=0``).

    Also tracks the quadrature error weighted by the magnitude of each block.
    """

    __slots__ = ("_atom", "_wall", "_ctx", "_opts", "_power", "abs_error", "magnitude")

    def __init__(
        self, atom: AtomModel, wall: WallModel, ctx: SpectralContext, opts: SolverOptions, power: int
    ) -> None:
        self._atom = atom
        self._wall = wall
        self._ctx = ctx
        self._opts = opts
        self._power = power
        self.abs_error = 0.0
        self.magnitude = 0.0

    def __call__(self, ls: np.ndarray) -> np.ndarray:
        ctx, opts, power = self._ctx, self._opts, self._power
        xi = np.asarray(matsubara_frequency(ctx, ls), dtype=float)
        zeta = xi / ctx.omega_c
        alpha = np.asarray(polarizability_at(self._atom, xi, opts.response), dtype=float)
        if opts.include_beta:
            beta = np.asarray(magnetic_susceptibility_at(self._atom, xi, ctx.T, opts.response), dtype=float)
        else:
            beta = np.zeros_like(alpha)

        response = wall_response(self._wall, zeta, ls, ctx.omega_c)
        zeta2 = np.square(zeta)

        def integrand(y: np.ndarray) -> np.ndarray:
            pair = response.at(y)
            weight = y**power * np.exp(-y)
            common = zeta2 * (pair.r_tm + pair.r_te)
            y2 = 2.0 * np.square(y)
            return np.stack([weight * (y2 * pair.r_tm - common), weight * (y2 * pair.r_te - common)])

        kernels, rel_error = integrate_tail(integrand, zeta, QUAD_SAFETY * opts.quad_rel_tol, tail_degree=power + 2)
        terms = np.stack([alpha * kernels[0], beta * kernels[1]], axis=1)

        size = float(np.sum(np.abs(terms)))
        self.abs_error += rel_error * size
        self.magnitude += size
        return terms

    @property
    def quad_error_estimate(self) -> float:
        if self.magnitude > 0:
            return self.abs_error / self.magnitude
        return 0.0 if self.abs_error == 0 else math.inf


def _warn_outside_validity(a: float, T: float) -> None:
    if not GUARD_A_MIN <= a <= GUARD_A_MAX:
        _logger.warning("separation a=%g cm outside the model validity range [%g, %g] cm", a, GUARD_A_MIN, GUARD_A_MAX)
    if not GUARD_T_MIN <= T <= GUARD_T_MAX:
        _logger.warning("temperature T=%g K outside the model validity range [%g, %g] K", T, GUARD_T_MIN, GUARD_T_MAX)


def _solve(
    atom: AtomModel, wall: WallModel, a: float, T: float, opts: SolverOptions, power: int
) -> tuple[float, float, ConvergenceReport]:
    ctx = SpectralContext(a, T)
    _warn_outside_validity(a, T)

    terms = _KernelTerms(atom, wall, ctx, opts, power)
    value, report = primed_sum(terms, opts.sum_rel_tol, opts.l_max)
    report = report.with_quadrature(terms.quad_error_estimate, opts.quad_rel_tol)
    return float(value[0]), float(value[1]), report


def cp_force(
    atom: AtomModel, wall: WallModel, a: float, T: float, opts: SolverOptions = SolverOptions()
) -> ForceResult:
    """
    Casimir-Polder force on ``atom`` at distance ``a`` (cm) from ``wall`` at temperature ``T`` (K).

    :raises NonConvergenceError: when the sum or the quadrature misses its tolerance; ``partial`` holds the result
    """
    alpha_sum, beta_sum, report = _solve(atom, wall, a, T, opts, power=1)
    prefactor = -CONSTANTS.k_B * T / (8.0 * a**4)
    result = ForceResult.from_parts(prefactor * alpha_sum, prefactor * beta_sum, report)

    _logger.info(
        "cp_force atom=%s wall=%s a=%g T=%g terms=%d f_total=%.6e",
        atom.name,
        wall.name,
        a,
        T,
        report.terms_used,
        result.f_total,
    )
    if not report.converged:
        raise NonConvergenceError(report, result)
    return result


def cp_free_energy(
    atom: AtomModel, wall: WallModel, a: float, T: float, opts: SolverOptions = SolverOptions()
) -> FreeEnergyResult:
    """Casimir-Polder free energy in erg; its negative a-derivative is :func:`cp_force`."""
    alpha_sum, beta_sum, report = _solve(atom, wall, a, T, opts, power=0)
    prefactor = -CONSTANTS.k_B * T / (8.0 * a**3)
    result = FreeEnergyResult.from_parts(prefactor * alpha_sum, prefactor * beta_sum, report)

    _logger.info(
        "cp_free_energy atom=%s wall=%s a=%g T=%g terms=%d fe_total=%.6e",
        atom.name,
        wall.name,
        a,
        T,
        report.terms_used,
        result.fe_total,
    )
    if not report.converged:
        raise NonConvergenceError(report, result)
    return result


def force_terms(
    atom: AtomModel, wall: WallModel, a: float, T: float, l: ArrayLike, opts: SolverOptions = SolverOptions()
) -> ForceTerms:
    """Force contributions of the Matsubara indices ``l``, split into alpha and beta parts."""
    ls = np.atleast_1d(np.asarray(l))
    if ls.ndim != 1 or not np.issubdtype(ls.dtype, np.integer):
        raise ContractError(f"Matsubara indices must be a 1-d integer array, got {l!r}")
    ctx = SpectralContext(a, T)

    terms = _KernelTerms(atom, wall, ctx, opts, power=1)(ls)
    weights = np.where(ls == 0, 0.5, 1.0) * (-CONSTANTS.k_B * T / (8.0 * a**4))
    return ForceTerms(ls, weights * terms[:, 0], weights * terms[:, 1])


def magnetic_deviation(
    atom: AtomModel, wall: WallModel, a: float, T: float, opts: SolverOptions = SolverOptions()
) -> float:
    """100 (|F| - |F_alpha|) / |F_alpha| in percent."""
    return cp_force(atom, wall, a, T, opts).deviation_pct


def static_bracket(tau: float) -> float:
    """
    sum'_l (6 + 6 zeta_l + 3 zeta_l^2 + zeta_l^3) e^-zeta_l with zeta_l = l tau, summed in closed form.

    Written with x = e^-tau, which is finite for every tau > 0. Below :data:`STATIC_SERIES_THRESHOLD` the Laurent
    expansion 24/tau - tau^5/1260 + tau^7/10080 - tau^9/142560 is used instead.
    """
    tau = require_positive("tau", tau)
    if tau < STATIC_SERIES_THRESHOLD:
        return 24.0 / tau - tau**5 / 1260.0 + tau**7 / 10080.0 - tau**9 / 142560.0

    x = math.exp(-tau)
    d = -math.expm1(-tau)  # 1 - x
    return (
        3.0
        + 6.0 * x / d
        + 6.0 * tau * x / d**2
        + 3.0 * tau**2 * x * (1.0 + x) / d**3
        + tau**3 * x * (1.0 + 4.0 * x + x**2) / d**4
    )


def ideal_metal_static_force(alpha0: float, beta0: float, a: float, T: float) -> float:
    """Force (dyn) on an atom with frequency-independent alpha0, beta0 (cm^3) near an ideal metal, closed form."""
    require_non_negative("alpha0", alpha0)
    require_non_negative("beta0", beta0)
    ctx = SpectralContext(a, T)
    return -CONSTANTS.k_B * T / (4.0 * a**4) * (alpha0 - beta0) * static_bracket(ctx.tau_norm)


def ideal_metal_series_force(
    alpha0: float,
    beta0: float,
    a: float,
    T: float,
    l_max: int = DEFAULT_L_MAX,
    rel_tol: float = DEFAULT_SUM_REL_TOL,
) -> float:
    """Same quantity as :func:`ideal_metal_static_force`, summed term by term over the Matsubara indices."""
    require_non_negative("alpha0", alpha0)
    require_non_negative("beta0", beta0)
    ctx = SpectralContext(a, T)

    def term(ls: np.ndarray) -> np.ndarray:
        zeta = ls * ctx.zeta_1
        return (6.0 + zeta * (6.0 + zeta * (3.0 + zeta))) * np.exp(-zeta)

    bracket, report = primed_sum(term, rel_tol, l_max)
    force = -CONSTANTS.k_B * T / (4.0 * a**4) * (alpha0 - beta0) * bracket
    if not report.converged:
        raise NonConvergenceError(report, force)
    return force


def zero_temperature_limit(alpha0: float, a: float) -> float:
    """-3 hbar c alpha0 / (2 pi a^5), the ideal-metal force as T -> 0."""
    require_non_negative("alpha0", alpha0)
    a = require_positive("separation", a)
    return -3.0 * CONSTANTS.hbar * CONSTANTS.c * alpha0 / (2.0 * math.pi * a**5)


def classical_limit(alpha0: float, beta0: float, a: float, T: float) -> float:
    """-3 k_B T (alpha0 - beta0) / (4 a^4), the ideal-metal force at high temperature."""
    a = require_positive("separation", a)
    T = require_positive("temperature", T)
    return -3.0 * CONSTANTS.k_B * T * (alpha0 - beta0) / (4.0 * a**4)


__all__ = [
    "GUARD_A_MIN",
    "GUARD_A_MAX",
    "GUARD_T_MIN",
    "GUARD_T_MAX",
    "STATIC_SERIES_THRESHOLD",
    "SolverOptions",
    "ForceResult",
    "FreeEnergyResult",
    "ForceTerms",
    "relative_deviation_pct",
    "cp_force",
    "cp_free_energy",
    "force_terms",
    "magnetic_deviation",
    "static_bracket",
    "ideal_metal_static_force",
    "ideal_metal_series_force",
    "zero_temperature_limit",
    "classical_limit",
]
