"""
Physical constants and unit conversions.

Everything inside the package works in Gaussian-CGS units:

========================  ===========
quantity                  unit
========================  ===========
length (separation a)     cm
angular frequency         rad/s
temperature               K
polarizability alpha      cm^3
susceptibility beta       cm^3
force                     dyn
free energy               erg
plate free energy         erg/cm^2
========================  ===========

SI values (metres, newtons) only appear at the command-line boundary, where they are converted exactly once with
the helpers below.

The constants are the CODATA values shipped with :mod:`scipy.constants`, converted to CGS:

=========  ====================================  ==================
symbol     CGS value                             source
=========  ====================================  ==================
hbar       1.0545718176e-27 erg s                CODATA hbar * 1e7
c          2.99792458e10 cm/s                    CODATA c * 1e2
k_B        1.380649e-16 erg/K                    CODATA k * 1e7
mu_B       9.2740100783e-21 erg/G                CODATA mu_B * 1e3
e          4.80320471e-10 statC                  CODATA e * c * 10
m_e        9.1093837015e-28 g                    CODATA m_e * 1e3
erg/eV     1.602176634e-12                       CODATA eV * 1e7
=========  ====================================  ==================
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import constants as codata

from .exceptions import DomainError

CM_PER_M = 100.0
DYN_PER_NEWTON = 1.0e5


@dataclass(frozen=True, slots=True)
class PhysicalConstants:
    """Physical constants in Gaussian-CGS units."""

    hbar: float  # erg s
    c: float  # cm/s
    k_B: float  # erg/K
    mu_B: float  # erg/G
    erg_per_eV: float
    e: float  # statC
    m_e: float  # g

    def __post_init__(self) -> None:
        for name, value in asdict(self).items():
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"constant {name} must be positive, got {value!r}")

        derived = self.e * self.hbar / (2 * self.m_e * self.c)
        if abs(derived - self.mu_B) > 1e-4 * self.mu_B:
            raise DomainError(f"Bohr magneton {self.mu_B!r} inconsistent with e*hbar/(2*m_e*c) = {derived!r}")

    @classmethod
    def codata(cls) -> "PhysicalConstants":
        """Builds the constant set from the CODATA values bundled with scipy."""
        return cls(
            hbar=codata.hbar * 1e7,
            c=codata.c * CM_PER_M,
            k_B=codata.k * 1e7,
            mu_B=codata.physical_constants["Bohr magneton"][0] * 1e3,
            erg_per_eV=codata.eV * 1e7,
            e=codata.e * codata.c * 10.0,
            m_e=codata.m_e * 1e3,
        )


CONSTANTS = PhysicalConstants.codata()


def ev_to_angular_frequency(e_ev: float) -> float:
    """Converts an energy hbar*omega in eV to the angular frequency omega in rad/s."""
    e_ev = float(e_ev)
    if not math.isfinite(e_ev) or e_ev < 0:
        raise DomainError(f"energy must be a non-negative number of eV, got {e_ev!r}")
    return e_ev * CONSTANTS.erg_per_eV / CONSTANTS.hbar


def angular_frequency_to_ev(omega: float) -> float:
    """Converts an angular frequency in rad/s to the energy hbar*omega in eV."""
    omega = float(omega)
    if not math.isfinite(omega) or omega < 0:
        raise DomainError(f"angular frequency must be non-negative, got {omega!r}")
    return omega * CONSTANTS.hbar / CONSTANTS.erg_per_eV


def meters_to_cm(value_m: float | np.ndarray) -> float | np.ndarray:
    return value_m * CM_PER_M


def cm_to_meters(value_cm: float | np.ndarray) -> float | np.ndarray:
    return value_cm / CM_PER_M


def dyn_to_newton(value_dyn: float | np.ndarray) -> float | np.ndarray:
    return value_dyn / DYN_PER_NEWTON


def newton_to_dyn(value_n: float | np.ndarray) -> float | np.ndarray:
    return value_n * DYN_PER_NEWTON


def constants_table() -> dict[str, float]:
    """Returns the constants table (CGS) as a plain mapping."""
    return asdict(CONSTANTS)


def constants_digest() -> str:
    """SHA-256 of the canonical JSON form of :func:`constants_table`."""
    payload = json.dumps(constants_table(), sort_keys=True).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


__all__ = [
    "CM_PER_M",
    "DYN_PER_NEWTON",
    "PhysicalConstants",
    "CONSTANTS",
    "ev_to_angular_frequency",
    "angular_frequency_to_ev",
    "meters_to_cm",
    "cm_to_meters",
    "dyn_to_newton",
    "newton_to_dyn",
    "constants_table",
    "constants_digest",
]
