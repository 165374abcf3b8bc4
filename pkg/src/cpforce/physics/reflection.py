"""
TM/TE reflection coefficients of a semispace at imaginary Matsubara frequencies.

Everything is expressed in the dimensionless variables zeta = xi / omega_c and y = 2 a q. The coefficients are
evaluated in the cancellation-free form

    r_TM = ((eps^2 - 1) y^2 - s) / (eps y + k)^2,    r_TE = ((mu^2 - 1) y^2 - s) / (mu y + k)^2,

with s = zeta^2 (eps mu - 1) and k = sqrt(y^2 + s), built from the excesses eps - 1 and mu - 1 so that walls with
eps - 1 of order 1e-11 still get correct leading digits.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from ..exceptions import ContractError, DomainError, NumericalError
from ..models.materials import (
    ConstantEps,
    Plasma,
    WallModel,
    eps_xi_squared_deficit,
    permeability_at,
)

_logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class ReflectionPair:
    r_tm: float | np.ndarray
    r_te: float | np.ndarray


@dataclass(frozen=True, slots=True)
class WallResponse:
    """
    Wall response at a block of Matsubara indices, reduced to what the Fresnel coefficients need.

    :param eps_excess: eps_l - 1 (ignored where ``unit_tm`` is set)
    :param mu_excess: mu_l - 1
    :param s: zeta_l^2 (eps_l mu_l - 1), finite even where eps_l is not
    :param unit_tm: indices whose TM coefficient is exactly 1 (plasma wall at l = 0)
    :param ideal: perfect conductor, (1, -1) everywhere
    """

    eps_excess: np.ndarray
    mu_excess: np.ndarray
    s: np.ndarray
    unit_tm: np.ndarray
    ideal: bool = False

    def at(self, y: ArrayLike) -> ReflectionPair:
        """Coefficients at ``y``, broadcast against the per-index arrays."""
        y = np.asarray(y, dtype=float)
        if self.ideal:
            shape = np.broadcast_shapes(y.shape, self.s.shape)
            return ReflectionPair(np.ones(shape), -np.ones(shape))

        y2 = np.square(y)
        k = np.sqrt(y2 + self.s)
        eps = 1.0 + self.eps_excess
        mu = 1.0 + self.mu_excess
        with np.errstate(divide="ignore", invalid="ignore"):
            r_tm = (self.eps_excess * (2.0 + self.eps_excess) * y2 - self.s) / np.square(eps * y + k)
            r_te = (self.mu_excess * (2.0 + self.mu_excess) * y2 - self.s) / np.square(mu * y + k)
        static = self.s == 0
        if np.any(static):
            # s = 0: no y dependence, (eps - 1)/(eps + 1) and (mu - 1)/(mu + 1) for every y including 0
            r_tm = np.where(static, self.eps_excess / (2.0 + self.eps_excess), r_tm)
            r_te = np.where(static, self.mu_excess / (2.0 + self.mu_excess), r_te)
        if np.any(self.unit_tm):
            r_tm = np.where(self.unit_tm, 1.0, r_tm)
        return ReflectionPair(r_tm, r_te)


def _check_indices(zeta: np.ndarray, l: np.ndarray) -> None:
    if np.any(~np.isfinite(zeta)) or np.any(zeta < 0):
        raise DomainError(f"zeta must be finite and >= 0, got {zeta!r}")
    if np.any(l < 0):
        raise DomainError(f"Matsubara index must be >= 0, got {l!r}")
    if np.any((l == 0) != (zeta == 0)):
        raise ContractError(f"zeta {zeta!r} inconsistent with Matsubara index {l!r}")


def wall_response(wall: WallModel, zeta: ArrayLike, l: ArrayLike, omega_c: float) -> WallResponse:
    """
    Per-index wall response for ``zeta`` = zeta_l at Matsubara indices ``l``.

    The term zeta^2 (eps mu - 1) is assembled as mu * zeta^2 (eps - 1) + (mu - 1) zeta^2, where zeta^2 (eps - 1) comes
    from :func:`eps_xi_squared_deficit` and stays finite for the plasma model at l = 0.
    """
    zeta, l = np.broadcast_arrays(np.asarray(zeta, dtype=float), np.asarray(l))
    _check_indices(zeta, l)
    if not omega_c > 0:
        raise DomainError(f"omega_c must be positive, got {omega_c!r}")

    if wall.is_ideal_metal:
        zeros = np.zeros(zeta.shape)
        return WallResponse(zeros, zeros, zeros, np.zeros(zeta.shape, dtype=bool), ideal=True)

    zeta2 = np.square(zeta)
    mu = np.asarray(permeability_at(wall.mu, l), dtype=float)
    deficit = np.asarray(eps_xi_squared_deficit(wall.eps, zeta * omega_c), dtype=float) / omega_c**2
    s = mu * deficit + (mu - 1.0) * zeta2

    match wall.eps:
        case Plasma():
            unit_tm = zeta == 0
            with np.errstate(divide="ignore", invalid="ignore"):
                eps_excess = np.where(unit_tm, 0.0, deficit / zeta2)
        case ConstantEps(eps0=eps0):
            unit_tm = np.zeros(zeta.shape, dtype=bool)
            eps_excess = np.full(zeta.shape, eps0 - 1.0)
        case _:
            raise ContractError(f"unsupported permittivity model {wall.eps!r}")

    return WallResponse(eps_excess, mu - 1.0, s, unit_tm)


def reflection_arrays(
    wall: WallModel, zeta: ArrayLike, y: ArrayLike, l: ArrayLike, omega_c: float
) -> ReflectionPair:
    """Vectorised :func:`reflection_at`; ``zeta``, ``y`` and ``l`` broadcast together."""
    zeta = np.asarray(zeta, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(~np.isfinite(y)) or np.any(y < zeta):
        raise DomainError(f"y must be finite and >= zeta, got y={y!r} zeta={zeta!r}")
    pair = wall_response(wall, zeta, l, omega_c).at(y)
    if not (np.all(np.isfinite(pair.r_tm)) and np.all(np.isfinite(pair.r_te))):
        raise NumericalError("non-finite reflection coefficient", {"wall": wall.name, "y": y, "l": l})
    return pair


def reflection_at(wall: WallModel, zeta: float, y: float, l: int, omega_c: float) -> ReflectionPair:
    """
    Reflection coefficients (r_TM, r_TE) of ``wall`` at zeta = zeta_l and y >= zeta.

    The ideal metal returns (1, -1). A plasma wall at l = 0 has r_TM = 1 and r_TE built from the finite deficit
    2 a omega_p / c; a nonmagnetic dielectric at l = 0 has r_TE = 0 exactly.
    """
    pair = reflection_arrays(wall, zeta, y, l, omega_c)
    _logger.debug("reflection wall=%s l=%s zeta=%g y=%g", wall.name, l, zeta, y)
    return ReflectionPair(float(pair.r_tm), float(pair.r_te))


__all__ = ["ReflectionPair", "WallResponse", "wall_response", "reflection_arrays", "reflection_at"]
