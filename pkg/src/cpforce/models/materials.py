from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import StrEnum
from types import MappingProxyType
from collections.abc import Mapping

import numpy as np
from numpy.typing import ArrayLike

from ..exceptions import ConfigError, ContractError, DomainError
from ..units import ev_to_angular_frequency
from ..utils import require_frequency


class MuMode(StrEnum):
    """Which Matsubara terms see the static permeability of a ferromagnet."""

    ZeroFrequencyOnly = "zero-frequency-only"
    AllFrequencies = "all-frequencies"


@dataclass(frozen=True, slots=True)
class IdealMetal:
    """Perfect conductor. Only usable as a flag: reflection short-circuits it to (1, -1)."""


@dataclass(frozen=True, slots=True)
class Plasma:
    """Dissipationless plasma model eps(i xi) = 1 + omega_p^2 / xi^2."""

    omega_p: float  # rad/s

    def __post_init__(self) -> None:
        if not (math.isfinite(self.omega_p) and self.omega_p > 0):
            raise DomainError(f"plasma frequency must be positive, got {self.omega_p!r}")


@dataclass(frozen=True, slots=True)
class ConstantEps:
    """Frequency-independent dielectric permittivity."""

    eps0: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.eps0) and self.eps0 >= 1):
            raise DomainError(f"eps0 must be >= 1, got {self.eps0!r}")


@dataclass(frozen=True, slots=True)
class NonMagnetic:
    """mu = 1 at every frequency."""


@dataclass(frozen=True, slots=True)
class StaticFerromagnet:
    """
    Ferromagnet described by the initial point of its normal magnetization curve.

    With :attr:`MuMode.ZeroFrequencyOnly` the permeability ``mu0`` only enters the l = 0 Matsubara term; with
    :attr:`MuMode.AllFrequencies` it enters every term.
    """

    mu0: float
    mode: MuMode = MuMode.ZeroFrequencyOnly

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mu0) and self.mu0 >= 1):
            raise DomainError(f"mu0 must be >= 1, got {self.mu0!r}")


type PermittivityModel = IdealMetal | Plasma | ConstantEps
type PermeabilityModel = NonMagnetic | StaticFerromagnet


@dataclass(frozen=True, slots=True)
class WallModel:
    """Semispace described by its permittivity and permeability on the imaginary frequency axis."""

    name: str
    eps: PermittivityModel
    mu: PermeabilityModel = NonMagnetic()

    @property
    def is_ideal_metal(self) -> bool:
        return isinstance(self.eps, IdealMetal)

    @property
    def is_magnetic(self) -> bool:
        return isinstance(self.mu, StaticFerromagnet) and self.mu.mu0 > 1

    def describe(self) -> dict[str, object]:
        """Flat description used by the ``presets`` command and JSON metadata."""
        info: dict[str, object] = {"name": self.name}
        match self.eps:
            case IdealMetal():
                info["eps_model"] = "ideal-metal"
            case Plasma(omega_p=omega_p):
                info["eps_model"] = "plasma"
                info["omega_p_rad_s"] = omega_p
            case ConstantEps(eps0=eps0):
                info["eps_model"] = "constant"
                info["eps0"] = eps0
        match self.mu:
            case NonMagnetic():
                info["mu0"] = 1.0
            case StaticFerromagnet(mu0=mu0, mode=mode):
                info["mu0"] = mu0
                info["mu_mode"] = str(mode)
        return info


def permittivity_at(model: PermittivityModel, xi: ArrayLike) -> float | np.ndarray:
    """
    Dielectric permittivity eps(i xi) at imaginary frequency ``xi`` (rad/s).

    The plasma model diverges at xi = 0 and returns ``inf`` there; use :func:`eps_xi_squared_deficit` for the finite
    combination xi^2 (eps - 1).
    """
    xi = require_frequency(xi)
    match model:
        case IdealMetal():
            raise ContractError("ideal metal has no finite permittivity; branch on WallModel.is_ideal_metal")
        case Plasma(omega_p=omega_p):
            with np.errstate(divide="ignore"):
                result = 1.0 + np.square(omega_p) / np.square(xi)
        case ConstantEps(eps0=eps0):
            result = np.full_like(xi, eps0)
        case _:
            raise ContractError(f"unknown permittivity model {model!r}")
    return float(result) if result.ndim == 0 else result


def eps_xi_squared_deficit(model: PermittivityModel, xi: ArrayLike) -> float | np.ndarray:
    """Returns xi^2 (eps(i xi) - 1) in (rad/s)^2, finite at xi = 0 for every model in scope."""
    xi = require_frequency(xi)
    match model:
        case IdealMetal():
            raise ContractError("ideal metal has no finite permittivity; branch on WallModel.is_ideal_metal")
        case Plasma(omega_p=omega_p):
            result = np.full_like(xi, np.square(omega_p))
        case ConstantEps(eps0=eps0):
            result = np.square(xi) * (eps0 - 1.0)
        case _:
            raise ContractError(f"unknown permittivity model {model!r}")
    return float(result) if result.ndim == 0 else result


def permeability_at(model: PermeabilityModel, l: ArrayLike) -> float | np.ndarray:
    """Magnetic permeability at the Matsubara index ``l`` (selection by index, not by frequency)."""
    l = np.asarray(l)
    if np.any(l < 0):
        raise DomainError(f"Matsubara index must be >= 0, got {l!r}")
    match model:
        case NonMagnetic():
            result = np.ones(l.shape)
        case StaticFerromagnet(mu0=mu0, mode=MuMode.AllFrequencies):
            result = np.full(l.shape, mu0)
        case StaticFerromagnet(mu0=mu0):
            result = np.where(l == 0, mu0, 1.0)
        case _:
            raise ContractError(f"unknown permeability model {model!r}")
    return float(result) if result.ndim == 0 else result


def with_mu_mode(wall: WallModel, mode: MuMode) -> WallModel:
    """Returns ``wall`` with its ferromagnetic permeability switched to ``mode``; nonmagnetic walls are unchanged."""
    if isinstance(wall.mu, StaticFerromagnet):
        return replace(wall, mu=replace(wall.mu, mode=mode))
    return wall


WALL_PRESETS: Mapping[str, WallModel] = MappingProxyType(
    {
        "ideal-metal": WallModel("ideal-metal", IdealMetal()),
        "au-plasma": WallModel("au-plasma", Plasma(ev_to_angular_frequency(9.0))),
        "fe-plasma": WallModel("fe-plasma", Plasma(ev_to_angular_frequency(11.1)), StaticFerromagnet(1000.0)),
        "ferro-dielectric": WallModel("ferro-dielectric", ConstantEps(3.0), StaticFerromagnet(100.0)),
    }
)

WALL_PROVENANCE: Mapping[str, str] = MappingProxyType(
    {
        "ideal-metal": "perfect conductor, r_TM = 1, r_TE = -1",
        "au-plasma": "Au, plasma model with hbar*omega_p = 9.0 eV",
        "fe-plasma": "Fe, plasma model with hbar*omega_p = 11.1 eV and mu(0) = 1000",
        "ferro-dielectric": "polyethylene with iron powder, eps(0) = 3 and mu(0) = 100",
    }
)


def wall_preset(name: str) -> WallModel:
    try:
        return WALL_PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown wall preset {name!r}; expected one of {', '.join(WALL_PRESETS)}") from None


__all__ = [
    "MuMode",
    "IdealMetal",
    "Plasma",
    "ConstantEps",
    "NonMagnetic",
    "StaticFerromagnet",
    "PermittivityModel",
    "PermeabilityModel",
    "WallModel",
    "permittivity_at",
    "eps_xi_squared_deficit",
    "permeability_at",
    "with_mu_mode",
    "WALL_PRESETS",
    "WALL_PROVENANCE",
    "wall_preset",
]
