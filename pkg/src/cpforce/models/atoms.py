from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, replace
from enum import StrEnum
from types import MappingProxyType
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from ..exceptions import ConfigError, DomainError
from ..units import CONSTANTS, angular_frequency_to_ev, ev_to_angular_frequency
from ..utils import require_frequency, require_positive

DEFAULT_TAU_REL = 1e-8  # s


class ResponseMode(StrEnum):
    """How the atomic response depends on frequency."""

    # alpha from the single-oscillator model, beta with its Debye roll-off
    Dynamic = "dynamic"
    # alpha(i xi) = alpha(0), beta(i xi) = beta(0; T)
    Static = "static"


@dataclass(frozen=True, slots=True)
class AtomModel:
    """
    Ground-state atom with an electric polarizability and a permanent magnetic moment.

    :param alpha0: static polarizability, cm^3
    :param omega_a: oscillator eigenfrequency, rad/s
    :param g: Lande factor
    :param J: total momentum quantum number
    :param tau_rel: relaxation time of the paramagnetic susceptibility, s
    """

    name: str
    alpha0: float
    omega_a: float
    g: float
    J: float
    tau_rel: float = DEFAULT_TAU_REL

    def __post_init__(self) -> None:
        for field_name in ("alpha0", "omega_a", "g"):
            value = getattr(self, field_name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{field_name} must be positive, got {value!r}")
        if not (math.isfinite(self.J) and self.J >= 0):
            raise DomainError(f"J must be >= 0, got {self.J!r}")
        if not (math.isfinite(self.tau_rel) and self.tau_rel >= 0):
            raise DomainError(f"tau_rel must be >= 0, got {self.tau_rel!r}")

    @property
    def magnetic_moment_squared(self) -> float:
        """g^2 mu_B^2 J (J + 1) in erg^2/G^2."""
        return self.g**2 * CONSTANTS.mu_B**2 * self.J * (self.J + 1)

    def describe(self) -> dict[str, object]:
        return {
            "name": self.name,
            "alpha0_cm3": self.alpha0,
            "hbar_omega_a_ev": angular_frequency_to_ev(self.omega_a),
            "g": self.g,
            "J": self.J,
            "tau_rel_s": self.tau_rel,
        }


def _scalar_or_array(value: np.ndarray) -> float | np.ndarray:
    return float(value) if value.ndim == 0 else value


def polarizability_at(
    atom: AtomModel, xi: ArrayLike, mode: ResponseMode = ResponseMode.Dynamic
) -> float | np.ndarray:
    """Electric polarizability alpha(i xi) in cm^3 (single-oscillator model)."""
    xi = require_frequency(xi)
    if mode == ResponseMode.Static:
        return _scalar_or_array(np.full_like(xi, atom.alpha0))
    return _scalar_or_array(atom.alpha0 / (1.0 + np.square(xi / atom.omega_a)))


def static_susceptibility(atom: AtomModel, T: float) -> float:
    """Curie-law static magnetic susceptibility beta(0; T) in cm^3."""
    T = require_positive("temperature", T)
    return atom.magnetic_moment_squared / (3.0 * CONSTANTS.k_B * T)


def magnetic_susceptibility_at(
    atom: AtomModel, xi: ArrayLike, T: float, mode: ResponseMode = ResponseMode.Dynamic
) -> float | np.ndarray:
    """Orientational magnetic susceptibility beta(i xi; T) in cm^3 with a Debye roll-off 1 / (1 + tau_rel xi)."""
    xi = require_frequency(xi)
    beta0 = static_susceptibility(atom, T)
    if mode == ResponseMode.Static:
        return _scalar_or_array(np.full_like(xi, beta0))
    return _scalar_or_array(beta0 / (1.0 + atom.tau_rel * xi))


def static_ratio(atom: AtomModel, T: float) -> float:
    """beta(0; T) / alpha(0)."""
    return static_susceptibility(atom, T) / atom.alpha0


ATOM_PRESETS: Mapping[str, AtomModel] = MappingProxyType(
    {
        "H": AtomModel("H", alpha0=6.67e-25, omega_a=ev_to_angular_frequency(11.65), g=1.0, J=0.5),
        "Rb87": AtomModel("Rb87", alpha0=4.73e-23, omega_a=ev_to_angular_frequency(1.68), g=1.0, J=0.5),
    }
)

ATOM_PROVENANCE: Mapping[str, str] = MappingProxyType(
    {
        "H": "hydrogen ground state: alpha(0) = 6.67e-25 cm^3, hbar*omega_a = 11.65 eV, g = 1, J = 1/2",
        "Rb87": "87Rb ground state: alpha(0) = 4.73e-23 cm^3, hbar*omega_a = 1.68 eV, g = 1, J = 1/2",
    }
)


def atom_preset(name: str, *, tau_rel: Optional[float] = None) -> AtomModel:
    try:
        atom = ATOM_PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown atom preset {name!r}; expected one of {', '.join(ATOM_PRESETS)}") from None
    if tau_rel is not None:
        atom = replace(atom, tau_rel=tau_rel)
    return atom


__all__ = [
    "DEFAULT_TAU_REL",
    "ResponseMode",
    "AtomModel",
    "polarizability_at",
    "static_susceptibility",
    "magnetic_susceptibility_at",
    "static_ratio",
    "ATOM_PRESETS",
    "ATOM_PROVENANCE",
    "atom_preset",
]
