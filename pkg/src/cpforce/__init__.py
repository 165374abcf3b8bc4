from .exceptions import (
    CasimirPolderError,
    ConfigError,
    ContractError,
    DomainError,
    NonConvergenceError,
    NumericalError,
    RarefactionError,
)
from .models.atoms import ATOM_PRESETS, AtomModel, ResponseMode, atom_preset
from .models.materials import (
    WALL_PRESETS,
    ConstantEps,
    IdealMetal,
    MuMode,
    NonMagnetic,
    Plasma,
    StaticFerromagnet,
    WallModel,
    wall_preset,
    with_mu_mode,
)
from .numerics.spectral import ConvergenceReport, SpectralContext
from .physics.casimir_polder import (
    ForceResult,
    FreeEnergyResult,
    SolverOptions,
    cp_force,
    cp_free_energy,
    force_terms,
    magnetic_deviation,
)
from .physics.plates import DiluteGasWall, plate_free_energy, rarefaction_check
from .physics.reflection import ReflectionPair, reflection_at

__all__ = [
    "CasimirPolderError",
    "ConfigError",
    "ContractError",
    "DomainError",
    "NonConvergenceError",
    "NumericalError",
    "RarefactionError",
    "ATOM_PRESETS",
    "AtomModel",
    "ResponseMode",
    "atom_preset",
    "WALL_PRESETS",
    "ConstantEps",
    "IdealMetal",
    "MuMode",
    "NonMagnetic",
    "Plasma",
    "StaticFerromagnet",
    "WallModel",
    "wall_preset",
    "with_mu_mode",
    "ConvergenceReport",
    "SpectralContext",
    "ForceResult",
    "FreeEnergyResult",
    "SolverOptions",
    "cp_force",
    "cp_free_energy",
    "force_terms",
    "magnetic_deviation",
    "DiluteGasWall",
    "plate_free_energy",
    "rarefaction_check",
    "ReflectionPair",
    "reflection_at",
]
