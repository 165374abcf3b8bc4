"""
Matsubara machinery: frequency grid, dimensionless variables, the primed sum and the quadrature over [zeta_l, inf).

Dimensionless variables: zeta_l = xi_l / omega_c and y = 2 a q_l, with omega_c = c / (2a).
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np
from numpy.typing import ArrayLike
from scipy.integrate import quad_vec

from .accumulator import Accumulator
from ..exceptions import ContractError, DomainError, NumericalError
from ..units import CONSTANTS

DEFAULT_SUM_REL_TOL = 1e-12
DEFAULT_QUAD_REL_TOL = 1e-12
DEFAULT_L_MAX = 1_000_000
DEFAULT_SPAN = 60.0
# consecutive negligible terms needed before the sum is truncated
TRUNCATION_RUN = 3

type TermFunction = Callable[[np.ndarray], ArrayLike]
type Integrand = Callable[[np.ndarray], ArrayLike]

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectralContext:
    """Separation ``a`` (cm) and temperature ``T`` (K) with the derived Matsubara scales."""

    a: float
    T: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and self.a > 0):
            raise DomainError(f"separation must be positive, got {self.a!r}")
        if not (math.isfinite(self.T) and self.T > 0):
            raise DomainError(f"temperature must be positive, got {self.T!r}")

    @cached_property
    def omega_c(self) -> float:
        """Characteristic frequency c / (2a), rad/s."""
        return CONSTANTS.c / (2.0 * self.a)

    @cached_property
    def xi_1(self) -> float:
        """First Matsubara frequency 2 pi k_B T / hbar, rad/s."""
        return 2.0 * math.pi * CONSTANTS.k_B * self.T / CONSTANTS.hbar

    @cached_property
    def zeta_1(self) -> float:
        return self.xi_1 / self.omega_c

    @cached_property
    def T_eff(self) -> float:
        """Effective temperature defined by k_B T_eff = hbar c / (2a), K."""
        return CONSTANTS.hbar * CONSTANTS.c / (2.0 * self.a * CONSTANTS.k_B)

    @cached_property
    def tau_norm(self) -> float:
        """Normalized temperature 2 pi T / T_eff; equals zeta_1."""
        return 2.0 * math.pi * self.T / self.T_eff

    def zeta(self, l: ArrayLike) -> float | np.ndarray:
        result = np.asarray(l, dtype=float) * self.zeta_1
        return float(result) if result.ndim == 0 else result


def matsubara_frequency(ctx: SpectralContext, l: ArrayLike) -> float | np.ndarray:
    """xi_l = l * xi_1 in rad/s."""
    l = np.asarray(l)
    if np.any(l < 0):
        raise DomainError(f"Matsubara index must be >= 0, got {l!r}")
    result = l.astype(float) * ctx.xi_1
    return float(result) if result.ndim == 0 else result


@dataclass(frozen=True, slots=True)
class ConvergenceReport:
    terms_used: int
    last_term_ratio: float
    quad_error_estimate: float
    converged: bool

    def with_quadrature(self, quad_error_estimate: float, quad_rel_tol: float) -> "ConvergenceReport":
        """Returns a copy carrying the quadrature error; convergence then also requires it below ``quad_rel_tol``."""
        return replace(
            self,
            quad_error_estimate=quad_error_estimate,
            converged=self.converged and quad_error_estimate < quad_rel_tol,
        )


def primed_sum(
    term: TermFunction,
    rel_tol: float = DEFAULT_SUM_REL_TOL,
    l_max: int = DEFAULT_L_MAX,
    *,
    block_size: int = 32,
    max_block_size: int = 1024,
) -> tuple[float | np.ndarray, ConvergenceReport]:
    """
    Matsubara sum with the l = 0 term halved.

    ``term`` is called with ascending blocks of indices (an integer array) and must return one value per index,
    either a scalar or a fixed-length vector. Values are reduced in ascending ``l`` with compensated accumulation;
    the sum stops after :data:`TRUNCATION_RUN` consecutive terms with ``|term| <= rel_tol * |partial sum|``
    (max-norm for vectors). Reaching ``l_max`` returns a report with ``converged=False``.
    """
    if not rel_tol > 0:
        raise DomainError(f"rel_tol must be positive, got {rel_tol!r}")
    if l_max < 0:
        raise DomainError(f"l_max must be >= 0, got {l_max!r}")

    accumulator: Accumulator | None = None
    below = 0
    last_ratio = math.inf
    terms_used = 0
    start = 0
    block = block_size

    while start <= l_max:
        ls = np.arange(start, min(start + block, l_max + 1))
        values = np.asarray(term(ls), dtype=float)
        if values.shape[:1] != ls.shape:
            raise ContractError(f"term returned shape {values.shape} for {len(ls)} indices")
        if accumulator is None:
            accumulator = Accumulator(values.shape[1:])
        _logger.debug("primed_sum block start=%d size=%d", start, len(ls))

        for l, value in zip(ls, values):
            if not np.all(np.isfinite(value)):
                raise NumericalError("non-finite Matsubara term", {"l": int(l)})
            if l == 0:
                value = 0.5 * value
            accumulator.add(value)
            terms_used += 1

            magnitude = float(np.max(np.abs(value)))
            partial = float(np.max(np.abs(accumulator.value)))
            if partial > 0:
                last_ratio = magnitude / partial
            else:
                last_ratio = 0.0 if magnitude == 0 else math.inf

            below = below + 1 if magnitude <= rel_tol * partial else 0
            if below >= TRUNCATION_RUN:
                report = ConvergenceReport(terms_used, last_ratio, 0.0, converged=last_ratio < rel_tol)
                return _unwrap(accumulator.value), report

        start += len(ls)
        block = min(2 * block, max_block_size)

    _logger.warning("primed_sum reached l_max=%d without convergence (last_term_ratio=%g)", l_max, last_ratio)
    value = accumulator.value if accumulator is not None else np.zeros(())
    return _unwrap(value), ConvergenceReport(terms_used, last_ratio, 0.0, converged=False)


def _unwrap(value: np.ndarray) -> float | np.ndarray:
    return float(value) if value.ndim == 0 else value.copy()


def tail_factor(upper: np.ndarray, degree: int) -> np.ndarray:
    """
    Ratio of int_U^inf y^n e^-y dy to U^n e^-U, i.e. sum_k n!/(n-k)! U^-k.

    Bounds the tail of any integrand dominated by C y^n e^-y from its value at U.
    """
    factor = np.ones_like(upper)
    coefficient = 1.0
    for k in range(1, degree + 1):
        coefficient *= degree - k + 1
        factor = factor + coefficient / upper**k
    return factor


def integrate_tail(
    integrand: Integrand,
    lower: ArrayLike,
    rel_tol: float = DEFAULT_QUAD_REL_TOL,
    *,
    span: float = DEFAULT_SPAN,
    tail_degree: int = 3,
    max_span: float = 16 * DEFAULT_SPAN,
) -> tuple[float | np.ndarray, float]:
    """
    Integral of ``integrand`` over [lower, inf) for integrands decaying like y^n e^-y.

    Adaptive Gauss-Kronrod on [lower, lower + span], vectorised over array-valued ``lower`` and vector-valued
    integrands (max-norm error control). Vector-valued integrands put the component axis first so that the trailing
    axis lines up with ``lower``. The neglected tail is bounded from the integrand at the upper end and added to the
    returned relative error estimate; ``span`` doubles until that bound is below ``rel_tol``.
    """
    lower = np.asarray(lower, dtype=float)
    if np.any(~np.isfinite(lower)) or np.any(lower < 0):
        raise DomainError(f"lower limit must be finite and >= 0, got {lower!r}")
    if not rel_tol > 0:
        raise DomainError(f"rel_tol must be positive, got {rel_tol!r}")

    def evaluate(y: np.ndarray) -> np.ndarray:
        values = np.asarray(integrand(y), dtype=float)
        if not np.all(np.isfinite(values)):
            bad = np.broadcast_to(y, values.shape)[~np.isfinite(values)]
            raise NumericalError("non-finite integrand sample", {"y": float(np.ravel(bad)[0])})
        return values

    while True:
        value, quad_error = quad_vec(lambda t: evaluate(lower + t), 0.0, span, epsrel=rel_tol, norm="max")
        value = np.asarray(value, dtype=float)
        scale = float(np.max(np.abs(value))) if value.size else 0.0

        upper = lower + span
        tail = float(np.max(np.abs(evaluate(upper)) * tail_factor(upper, tail_degree)))
        if tail <= rel_tol * scale or span >= max_span:
            break
        span *= 2.0

    if scale > 0:
        rel_error = (float(quad_error) + tail) / scale
    else:
        rel_error = 0.0 if float(quad_error) + tail == 0 else math.inf
    return _unwrap(value), rel_error


__all__ = [
    "DEFAULT_SUM_REL_TOL",
    "DEFAULT_QUAD_REL_TOL",
    "DEFAULT_L_MAX",
    "TRUNCATION_RUN",
    "SpectralContext",
    "matsubara_frequency",
    "ConvergenceReport",
    "primed_sum",
    "tail_factor",
    "integrate_tail",
]
