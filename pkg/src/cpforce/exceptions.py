from __future__ import annotations

from collections.abc import Mapping
from typing import Any, Optional, TYPE_CHECKING

if TYPE_CHECKING:
    from .numerics.spectral import ConvergenceReport


class CasimirPolderError(Exception):
    """Base class for cpforce errors."""


class DomainError(CasimirPolderError, ValueError):
    """Input outside the domain of an operation."""


class ContractError(CasimirPolderError):
    """Caller broke a documented precondition."""


class NumericalError(CasimirPolderError, ArithmeticError):
    """Non-finite or otherwise unusable intermediate value."""

    context: dict[str, Any]

    def __init__(self, message: str, context: Optional[Mapping[str, Any]] = None) -> None:
        self.context = dict(context or {})
        if self.context:
            details = " ".join(f"{key}={value!r}" for key, value in self.context.items())
            message = f"{message} ({details})"
        super().__init__(message)


class NonConvergenceError(NumericalError):
    """Matsubara sum or quadrature did not reach the requested tolerance."""

    report: "ConvergenceReport"
    partial: Any

    def __init__(self, report: "ConvergenceReport", partial: Any = None) -> None:
        self.report = report
        self.partial = partial
        super().__init__(
            "Spectral sum did not converge",
            {
                "terms_used": report.terms_used,
                "last_term_ratio": report.last_term_ratio,
                "quad_error_estimate": report.quad_error_estimate,
            },
        )


class ConfigError(CasimirPolderError):
    """Invalid configuration file or command-line input."""


class RarefactionError(CasimirPolderError):
    """The dilute-gas harness could not produce a usable extrapolation."""


__all__ = [
    "CasimirPolderError",
    "DomainError",
    "ContractError",
    "NumericalError",
    "NonConvergenceError",
    "ConfigError",
    "RarefactionError",
]
