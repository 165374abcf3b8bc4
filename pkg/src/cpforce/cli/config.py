"""
Versioned TOML configuration.

Example::

    schema_version = 1

    [atom]
    preset = "H"
    tau_rel_s = 1e-8

    [wall]
    eps_model = "constant"
    eps0 = 3.0
    mu0 = 100.0
    mu_mode = "zero-frequency-only"

    [sweep]
    temp_k = 1.0
    a_min_m = 1e-6
    a_max_m = 1e-5
    points = 19
    spacing = "log"
    mode = "full"

    [tolerances]
    sum_rel_tol = 1e-12
    quad_rel_tol = 1e-12
    l_max = 1000000

Unknown tables or keys are errors.
"""

from __future__ import annotations

import tomllib
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Any, Optional

from ..exceptions import CasimirPolderError, ConfigError
from ..models.atoms import AtomModel, atom_preset
from ..models.materials import (
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
from ..units import ev_to_angular_frequency

SCHEMA_VERSION = 1

SCHEMA: Mapping[str, frozenset[str]] = MappingProxyType(
    {
        "atom": frozenset({"preset", "name", "alpha0_cm3", "hbar_omega_a_ev", "g", "J", "tau_rel_s"}),
        "wall": frozenset({"preset", "name", "eps_model", "omega_p_ev", "eps0", "mu0", "mu_mode"}),
        "sweep": frozenset({"temp_k", "a_min_m", "a_max_m", "points", "spacing", "mode"}),
        "tolerances": frozenset({"sum_rel_tol", "quad_rel_tol", "l_max"}),
    }
)


@dataclass(frozen=True, slots=True)
class Config:
    atom: Optional[AtomModel] = None
    wall: Optional[WallModel] = None
    sweep: Mapping[str, Any] = field(default_factory=dict)
    tolerances: Mapping[str, Any] = field(default_factory=dict)


def _number(table: str, key: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"[{table}] {key} must be a number, got {value!r}")
    return float(value)


def _string(table: str, key: str, value: Any) -> str:
    if not isinstance(value, str):
        raise ConfigError(f"[{table}] {key} must be a string, got {value!r}")
    return value


def _check_keys(table: str, values: Mapping[str, Any]) -> None:
    unknown = sorted(set(values) - SCHEMA[table])
    if unknown:
        raise ConfigError(f"unknown key(s) in [{table}]: {', '.join(unknown)}")


def atom_from_table(table: Mapping[str, Any]) -> AtomModel:
    """Builds an atom from an ``[atom]`` table: a preset (optionally with ``tau_rel_s``) or a full inline model."""
    _check_keys("atom", table)
    tau_rel = _number("atom", "tau_rel_s", table["tau_rel_s"]) if "tau_rel_s" in table else None

    try:
        if "preset" in table:
            extra = sorted(set(table) - {"preset", "tau_rel_s"})
            if extra:
                raise ConfigError(f"[atom] preset cannot be combined with {', '.join(extra)}")
            return atom_preset(_string("atom", "preset", table["preset"]), tau_rel=tau_rel)

        missing = sorted({"alpha0_cm3", "hbar_omega_a_ev", "g", "J"} - set(table))
        if missing:
            raise ConfigError(f"[atom] needs either preset or {', '.join(missing)}")
        overrides = {} if tau_rel is None else {"tau_rel": tau_rel}
        return AtomModel(
            name=_string("atom", "name", table.get("name", "custom")),
            alpha0=_number("atom", "alpha0_cm3", table["alpha0_cm3"]),
            omega_a=ev_to_angular_frequency(_number("atom", "hbar_omega_a_ev", table["hbar_omega_a_ev"])),
            g=_number("atom", "g", table["g"]),
            J=_number("atom", "J", table["J"]),
            **overrides,
        )
    except ConfigError:
        raise
    except CasimirPolderError as e:
        raise ConfigError(f"invalid [atom]: {e}") from e


def _mu_mode(value: Any) -> MuMode:
    try:
        return MuMode(_string("wall", "mu_mode", value))
    except ValueError:
        raise ConfigError(f"[wall] mu_mode must be one of {', '.join(MuMode)}, got {value!r}") from None


def wall_from_table(table: Mapping[str, Any]) -> WallModel:
    """Builds a wall from a ``[wall]`` table: a preset (optionally with ``mu_mode``) or an inline model."""
    _check_keys("wall", table)

    try:
        if "preset" in table:
            extra = sorted(set(table) - {"preset", "mu_mode"})
            if extra:
                raise ConfigError(f"[wall] preset cannot be combined with {', '.join(extra)}")
            wall = wall_preset(_string("wall", "preset", table["preset"]))
            return with_mu_mode(wall, _mu_mode(table["mu_mode"])) if "mu_mode" in table else wall

        match table.get("eps_model"):
            case "ideal-metal":
                allowed = {"name", "eps_model"}
                eps = IdealMetal()
            case "plasma":
                allowed = {"name", "eps_model", "omega_p_ev", "mu0", "mu_mode"}
                if "omega_p_ev" not in table:
                    raise ConfigError("[wall] eps_model = 'plasma' needs omega_p_ev")
                eps = Plasma(ev_to_angular_frequency(_number("wall", "omega_p_ev", table["omega_p_ev"])))
            case "constant":
                allowed = {"name", "eps_model", "eps0", "mu0", "mu_mode"}
                if "eps0" not in table:
                    raise ConfigError("[wall] eps_model = 'constant' needs eps0")
                eps = ConstantEps(_number("wall", "eps0", table["eps0"]))
            case other:
                raise ConfigError(f"[wall] eps_model must be ideal-metal, plasma or constant, got {other!r}")

        extra = sorted(set(table) - allowed)
        if extra:
            raise ConfigError(f"[wall] {', '.join(extra)} not valid for eps_model = {table['eps_model']!r}")

        mu0 = _number("wall", "mu0", table.get("mu0", 1.0))
        mode = _mu_mode(table["mu_mode"]) if "mu_mode" in table else MuMode.ZeroFrequencyOnly
        mu = NonMagnetic() if mu0 == 1.0 and "mu_mode" not in table else StaticFerromagnet(mu0, mode)
        return WallModel(_string("wall", "name", table.get("name", "custom")), eps, mu)
    except ConfigError:
        raise
    except CasimirPolderError as e:
        raise ConfigError(f"invalid [wall]: {e}") from e


def parse_config(document: Mapping[str, Any]) -> Config:
    """Validates a decoded TOML document."""
    if "schema_version" not in document:
        raise ConfigError("schema_version is mandatory")
    version = document["schema_version"]
    if version != SCHEMA_VERSION or isinstance(version, bool):
        raise ConfigError(f"unsupported schema_version {version!r}; expected {SCHEMA_VERSION}")

    unknown = sorted(set(document) - set(SCHEMA) - {"schema_version"})
    if unknown:
        raise ConfigError(f"unknown table(s) or key(s): {', '.join(unknown)}")

    tables: dict[str, Mapping[str, Any]] = {}
    for name in SCHEMA:
        value = document.get(name, {})
        if not isinstance(value, Mapping):
            raise ConfigError(f"[{name}] must be a table")
        _check_keys(name, value)
        tables[name] = value

    return Config(
        atom=atom_from_table(tables["atom"]) if tables["atom"] else None,
        wall=wall_from_table(tables["wall"]) if tables["wall"] else None,
        sweep=dict(tables["sweep"]),
        tolerances=dict(tables["tolerances"]),
    )


def load_config(path: str | Path) -> Config:
    path = Path(path)
    try:
        with path.open("rb") as f:
            document = tomllib.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"malformed config {path}: {e}") from e
    return parse_config(document)


__all__ = ["SCHEMA_VERSION", "SCHEMA", "Config", "atom_from_table", "wall_from_table", "parse_config", "load_config"]
