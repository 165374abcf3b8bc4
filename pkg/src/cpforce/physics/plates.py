"""
Plate-plate Lifshitz free energy per unit area and the dilute-gas consistency check.

The check replaces the second plate by a rarefied gas of the atoms under study. To first order in the number density
N, the plate-plate free energy divided by N must equal the integral of the atom-wall free energy from ``a`` to
infinity; agreement validates the atom-wall kernel independently of its derivation.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial
from scipy import integrate, special

from ..exceptions import DomainError, NonConvergenceError, NumericalError, RarefactionError
from ..models.atoms import AtomModel, magnetic_susceptibility_at, polarizability_at
from ..models.materials import WallModel
from ..numerics.spectral import SpectralContext, integrate_tail, matsubara_frequency, primed_sum
from ..units import CONSTANTS
from ..utils import require_positive
from .casimir_polder import QUAD_SAFETY, SolverOptions, cp_free_energy
from .reflection import ReflectionPair, WallResponse, wall_response

# upper bound on 4 pi N alpha(0) for the first-order expansion in N
DILUTION_LIMIT = 1e-3

# outer edge of the explicit z-integration, in units of a
ATOM_INTEGRAL_EXTENT = 20.0
ATOM_QUAD_REL_TOL = 1e-8

DEFAULT_MISMATCH_TOL = 1e-4

# relative spread of D(N) treated as numerical noise by the monotonicity check
MONOTONE_NOISE = 1e-9

_logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class DiluteGasWall:
    """Semispace of a rarefied gas: eps = 1 + 4 pi N alpha(i xi), mu = 1 + 4 pi N beta(i xi; T)."""

    atom: AtomModel
    N: float  # cm^-3

    def __post_init__(self) -> None:
        require_positive("number density", self.N)
        if 4.0 * math.pi * self.N * self.atom.alpha0 >= DILUTION_LIMIT:
            raise DomainError(
                f"number density {self.N:g} cm^-3 too high for {self.atom.name}: "
                f"4*pi*N*alpha0 = {4.0 * math.pi * self.N * self.atom.alpha0:g} >= {DILUTION_LIMIT:g}"
            )

    @property
    def name(self) -> str:
        return f"dilute-{self.atom.name}-{self.N:g}"


type PlateWall = WallModel | DiluteGasWall


def dilute_response(wall: DiluteGasWall, ctx: SpectralContext, l: np.ndarray, opts: SolverOptions) -> WallResponse:
    """Per-index response of the gas, keeping eps - 1 and mu - 1 exact instead of subtracting 1."""
    xi = np.asarray(matsubara_frequency(ctx, l), dtype=float)
    zeta = xi / ctx.omega_c
    eps_excess = 4.0 * math.pi * wall.N * np.asarray(polarizability_at(wall.atom, xi, opts.response), dtype=float)
    if opts.include_beta:
        beta = np.asarray(magnetic_susceptibility_at(wall.atom, xi, ctx.T, opts.response), dtype=float)
        mu_excess = 4.0 * math.pi * wall.N * beta
    else:
        mu_excess = np.zeros_like(eps_excess)
    s = np.square(zeta) * (eps_excess + mu_excess + eps_excess * mu_excess)
    return WallResponse(eps_excess, mu_excess, s, np.zeros(zeta.shape, dtype=bool))


def _response(wall: PlateWall, ctx: SpectralContext, l: np.ndarray, opts: SolverOptions) -> WallResponse:
    match wall:
        case DiluteGasWall():
            return dilute_response(wall, ctx, l, opts)
        case _:
            return wall_response(wall, np.asarray(matsubara_frequency(ctx, l)) / ctx.omega_c, l, ctx.omega_c)


def _log_one_minus(product: np.ndarray, y: np.ndarray) -> np.ndarray:
    """ln(1 - R e^-y) for R = r1 r2 <= 1, accurate both for R e^-y near 0 and near 1."""
    x = product * np.exp(-y)
    # 1 - R e^-y = (1 - e^-y) + (1 - R) e^-y, both parts non-negative
    argument = -np.expm1(-y) + (1.0 - product) * np.exp(-y)
    if np.any(argument <= 0):
        worst = float(np.broadcast_to(y, argument.shape).flat[np.argmin(argument)])
        raise NumericalError("non-positive logarithm argument", {"y": worst})
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x < 0.5, np.log1p(-x), np.log(argument))


def first_order_reflection(
    wall: DiluteGasWall, zeta: float, y: float, xi: float, T: float, opts: SolverOptions = SolverOptions()
) -> ReflectionPair:
    """
    Reflection coefficients of the gas to first order in N:

        r_TM = pi N [2 alpha - (alpha + beta) zeta^2 / y^2],   r_TE = pi N [2 beta - (alpha + beta) zeta^2 / y^2]

    with alpha, beta taken at the imaginary frequency ``xi`` (rad/s).
    """
    if zeta < 0 or y <= 0 or y < zeta:
        raise DomainError(f"need 0 <= zeta <= y and y > 0, got zeta={zeta!r} y={y!r}")
    alpha = polarizability_at(wall.atom, xi, opts.response)
    beta = magnetic_susceptibility_at(wall.atom, xi, T, opts.response) if opts.include_beta else 0.0
    shared = (alpha + beta) * zeta**2 / y**2
    return ReflectionPair(math.pi * wall.N * (2.0 * alpha - shared), math.pi * wall.N * (2.0 * beta - shared))


def plate_free_energy(
    wall1: PlateWall, wall2: PlateWall, a: float, T: float, opts: SolverOptions = SolverOptions()
) -> float:
    """
    Lifshitz free energy per unit area (erg/cm^2) of two semispaces a distance ``a`` (cm) apart:

        (k_B T / 8 pi a^2) sum'_l int_{zeta_l}^inf dy y {ln[1 - r1_TM r2_TM e^-y] + ln[1 - r1_TE r2_TE e^-y]}
    """
    ctx = SpectralContext(a, T)
    errors: list[float] = []

    def term(ls: np.ndarray) -> np.ndarray:
        zeta = np.asarray(matsubara_frequency(ctx, ls), dtype=float) / ctx.omega_c
        response1 = _response(wall1, ctx, ls, opts)
        response2 = _response(wall2, ctx, ls, opts)

        def integrand(y: np.ndarray) -> np.ndarray:
            pair1, pair2 = response1.at(y), response2.at(y)
            try:
                tm = _log_one_minus(pair1.r_tm * pair2.r_tm, y)
                te = _log_one_minus(pair1.r_te * pair2.r_te, y)
            except NumericalError as e:
                context = {**e.context, "wall1": wall1.name, "wall2": wall2.name}
                raise NumericalError("plate integrand failed", context) from e
            return y * (tm + te)

        value, rel_error = integrate_tail(integrand, zeta, QUAD_SAFETY * opts.quad_rel_tol, tail_degree=1)
        errors.append(rel_error)
        return value

    total, report = primed_sum(term, opts.sum_rel_tol, opts.l_max)
    report = report.with_quadrature(max(errors, default=0.0), opts.quad_rel_tol)
    free_energy = CONSTANTS.k_B * T / (8.0 * math.pi * a**2) * total

    _logger.info(
        "plate_free_energy wall1=%s wall2=%s a=%g T=%g terms=%d value=%.6e",
        wall1.name,
        wall2.name,
        a,
        T,
        report.terms_used,
        free_energy,
    )
    if not report.converged:
        raise NonConvergenceError(report, free_energy)
    return free_energy


def plate_classical_limit(a: float, T: float) -> float:
    """-k_B T zeta(3) / (8 pi a^2), two ideal metals at high temperature."""
    a = require_positive("separation", a)
    T = require_positive("temperature", T)
    return -CONSTANTS.k_B * T * float(special.zeta(3.0)) / (8.0 * math.pi * a**2)


@dataclass(frozen=True, slots=True)
class AtomIntegral:
    """int_a^inf F_A(z) dz in erg cm, split into the explicit part on [a, 20a] and the tail beyond."""

    value: float
    explicit: float
    tail: float
    tail_exponent: float
    tail_bound: float
    quad_error: float = 0.0
    quad_message: Optional[str] = None

    @property
    def quad_converged(self) -> bool:
        return self.quad_message is None and self.quad_error <= ATOM_QUAD_REL_TOL * abs(self.explicit)


def atom_free_energy_integral(
    atom: AtomModel, wall: WallModel, a: float, T: float, opts: SolverOptions = SolverOptions()
) -> AtomIntegral:
    """
    int_a^inf F_A(z, T) dz of the atom-wall free energy.

    [a, 20a] is integrated adaptively in ln z. Beyond 20a the free energy is continued as C z^-p with p fitted from
    its values at 10a and 20a; the z^-3 classical asymptote, which decays no faster than any admissible continuation,
    bounds the error of that tail.
    """
    a = require_positive("separation", a)
    upper = ATOM_INTEGRAL_EXTENT * a

    def free_energy(z: float) -> float:
        return cp_free_energy(atom, wall, z, T, opts).fe_total

    explicit, quad_error, _, *message = integrate.quad(
        lambda u: free_energy(a * math.exp(u)) * a * math.exp(u),
        0.0,
        math.log(ATOM_INTEGRAL_EXTENT),
        epsrel=ATOM_QUAD_REL_TOL,
        epsabs=0.0,
        limit=8,
        full_output=1,
    )
    quad_message = message[0] if message else None
    if quad_message is not None:
        _logger.warning("atom integral quadrature a=%g T=%g: %s", a, T, quad_message)

    f_mid = free_energy(upper / 2.0)
    f_end = free_energy(upper)
    if f_mid == 0 or f_end == 0 or math.copysign(1.0, f_mid) != math.copysign(1.0, f_end):
        raise RarefactionError(f"cannot fit the free-energy tail beyond z={upper:g} cm (F={f_mid!r}, {f_end!r})")
    exponent = math.log(f_mid / f_end) / math.log(2.0)
    if exponent <= 1:
        raise RarefactionError(f"free-energy tail decays too slowly to integrate (exponent {exponent:g})")

    tail = f_end * upper / (exponent - 1.0)
    classical_tail = f_end * upper / 2.0
    bound = abs(classical_tail - tail) + abs(quad_error)
    _logger.debug("atom integral explicit=%.6e tail=%.6e exponent=%.4f", explicit, tail, exponent)
    return AtomIntegral(explicit + tail, explicit, tail, exponent, bound, quad_error, quad_message)


@dataclass(frozen=True, slots=True)
class RarefactionReport:
    """
    Outcome of :func:`rarefaction_check`.

    ``D`` holds plate_free_energy / N for each density; ``extrapolated`` is its N -> 0 limit and ``mismatch`` the
    relative distance to ``atom_integral``.
    """

    atom: str
    wall: str
    a: float
    T: float
    N_values: tuple[float, ...]
    D: tuple[float, ...]
    extrapolated: float
    atom_integral: AtomIntegral
    mismatch: float
    monotone: bool
    passed: bool
    tolerance: float = DEFAULT_MISMATCH_TOL
    diagnostics: tuple[str, ...] = field(default=())

    def as_dict(self) -> dict[str, object]:
        return {
            "atom": self.atom,
            "wall": self.wall,
            "a_cm": self.a,
            "T_K": self.T,
            "N_values_cm3": list(self.N_values),
            "D": list(self.D),
            "extrapolated": self.extrapolated,
            "atom_integral": self.atom_integral.value,
            "tail_bound": self.atom_integral.tail_bound,
            "quad_error": self.atom_integral.quad_error,
            "mismatch": self.mismatch,
            "monotone": self.monotone,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "diagnostics": list(self.diagnostics),
        }


def richardson_limit(N_values: Sequence[float], D: Sequence[float]) -> float:
    """Value at N = 0 of the polynomial through (N_i, D_i), of degree len(N) - 1."""
    if len(N_values) < 2:
        raise RarefactionError("extrapolation needs at least two densities")
    scale = max(N_values)
    x = np.asarray(N_values, dtype=float) / scale
    coefficients = polynomial.polyfit(x, np.asarray(D, dtype=float), len(N_values) - 1)
    return float(coefficients[0])


def _is_monotone(D: Sequence[float]) -> bool:
    differences = np.diff(np.asarray(D, dtype=float))
    noise = MONOTONE_NOISE * max(abs(d) for d in D)
    significant = differences[np.abs(differences) > noise]
    return bool(np.all(significant > 0) or np.all(significant < 0))


def rarefaction_check(
    atom: AtomModel,
    wall: WallModel,
    a: float,
    T: float,
    N_values: Sequence[float],
    opts: SolverOptions = SolverOptions(),
    tolerance: float = DEFAULT_MISMATCH_TOL,
) -> RarefactionReport:
    """
    Compares the N -> 0 limit of plate_free_energy(wall, gas of N atoms) / N with int_a^inf F_A(z) dz.

    ``N_values`` must be strictly decreasing and each density must satisfy the dilution guard.
    """
    N_values = tuple(float(N) for N in N_values)
    if len(N_values) < 2:
        raise RarefactionError("rarefaction check needs at least two densities")
    if any(later >= earlier for earlier, later in zip(N_values, N_values[1:])):
        raise DomainError(f"number densities must be strictly decreasing, got {N_values!r}")
    gases = [DiluteGasWall(atom, N) for N in N_values]

    D = tuple(plate_free_energy(wall, gas, a, T, opts) / gas.N for gas in gases)
    extrapolated = richardson_limit(N_values, D)
    atom_integral = atom_free_energy_integral(atom, wall, a, T, opts)
    if atom_integral.value == 0:
        raise RarefactionError("atom-wall free energy integral vanishes; mismatch undefined")
    mismatch = abs(extrapolated - atom_integral.value) / abs(atom_integral.value)

    diagnostics: list[str] = []
    monotone = _is_monotone(D)
    if not monotone:
        diagnostics.append(f"D(N) is not monotone in N: {D!r}")
    if not atom_integral.quad_converged:
        diagnostics.append(
            f"atom integral quadrature error {atom_integral.quad_error:.3e} above "
            f"{ATOM_QUAD_REL_TOL:.0e} relative ({atom_integral.quad_message or 'no message'})"
        )
    if mismatch >= tolerance:
        diagnostics.append(f"mismatch {mismatch:.3e} exceeds tolerance {tolerance:.1e}")

    report = RarefactionReport(
        atom=atom.name,
        wall=wall.name,
        a=a,
        T=T,
        N_values=N_values,
        D=D,
        extrapolated=extrapolated,
        atom_integral=atom_integral,
        mismatch=mismatch,
        monotone=monotone,
        passed=not diagnostics,
        tolerance=tolerance,
        diagnostics=tuple(diagnostics),
    )
    _logger.info(
        "rarefaction_check atom=%s wall=%s a=%g T=%g mismatch=%.3e passed=%s",
        atom.name,
        wall.name,
        a,
        T,
        mismatch,
        report.passed,
    )
    return report


__all__ = [
    "DILUTION_LIMIT",
    "ATOM_INTEGRAL_EXTENT",
    "ATOM_QUAD_REL_TOL",
    "DEFAULT_MISMATCH_TOL",
    "DiluteGasWall",
    "PlateWall",
    "dilute_response",
    "first_order_reflection",
    "plate_free_energy",
    "plate_classical_limit",
    "AtomIntegral",
    "atom_free_energy_integral",
    "RarefactionReport",
    "richardson_limit",
    "rarefaction_check",
]
