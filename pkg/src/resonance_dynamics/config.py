"""JSON run configuration for the command-line tool.

Schema (all lengths/times in the same units; c = 1)::

    {
      "atoms": {"r_A": [x, y, z], "r_B": [x, y, z],
                "mu_A": [x, y, z], "mu_B": [x, y, z], "k0": 1.0},
      "parity": "symmetric" | "antisymmetric",
      "mode": "full" | "rwa",
      "units": "natural" | "gaussian_from_si",
      "time_grid": {"t_start": 0.0, "t_end": 40.0, "n_samples": 401},
      "grid": {"origin": [...], "axes": [[...], [...]],
               "extents": [Lu, Lv], "resolution": [nu, nv]},     (optional)
      "alpha": 1.0,                                               (optional)
      "probe_point": [x, y, z],                                   (optional)
      "t_eval": 30.0,                                             (optional)
      "quadrature": {... QuadratureSettings fields ...},          (optional)
      "lifetime_hint": 1e4,                                       (optional)
      "lightcone_epsilon": 1e-9                                   (optional)
    }

With ``"units": "gaussian_from_si"`` the inputs are SI (m, C m, 1/m, s,
C m^2/V) and are converted to Gaussian cgs when the config is loaded; all
outputs are then in erg, erg/cm^3 and dyn.
"""
from __future__ import annotations

import copy
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import units
from .errors import ConfigError, ResonanceError
from .field import GridSpec
from .oracle import QuadratureSettings
from .resonance import AtomPairConfig, CouplingMode, DickeParity

QUADRATURE_ENV_VAR = "RESONANCE_QUADRATURE_SETTINGS"

UNITS = ("natural", "gaussian_from_si")

_TOP_LEVEL = {
    "atoms", "parity", "mode", "units", "time_grid", "grid", "alpha", "probe_point",
    "t_eval", "quadrature", "lifetime_hint", "lightcone_epsilon",
}


@dataclass(frozen=True)
class TimeGrid:
    t_start: float
    t_end: float
    n_samples: int

    def __post_init__(self):
        if not (math.isfinite(self.t_start) and math.isfinite(self.t_end)):
            raise ConfigError("time_grid: bounds must be finite")
        if self.t_start < 0:
            raise ConfigError("time_grid.t_start: must be >= 0")
        if self.t_end < self.t_start:
            raise ConfigError("time_grid.t_end: must be >= t_start")
        if self.n_samples < 2:
            raise ConfigError("time_grid.n_samples: must be >= 2")

    def values(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_samples)


@dataclass(frozen=True)
class RunConfig:
    atoms: AtomPairConfig
    parity: DickeParity = DickeParity.SYMMETRIC
    mode: CouplingMode = CouplingMode.FULL
    units: str = "natural"
    time_grid: TimeGrid = field(default_factory=lambda: TimeGrid(0.0, 1.0, 2))
    grid: GridSpec | None = None
    alpha: float | None = None
    probe_point: tuple | None = None
    t_eval: float | None = None
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)
    lifetime_hint: float | None = None
    lightcone_epsilon: float | None = None

    @property
    def evaluation_time(self) -> float:
        return self.time_grid.t_end if self.t_eval is None else self.t_eval

    def to_dict(self) -> dict:
        d = {
            "atoms": self.atoms.to_dict(),
            "parity": self.parity.name.lower(),
            "mode": self.mode.name.lower(),
            "units": self.units,
            "time_grid": {
                "t_start": self.time_grid.t_start,
                "t_end": self.time_grid.t_end,
                "n_samples": self.time_grid.n_samples,
            },
            "quadrature": self.quadrature.to_dict(),
        }
        for key in ("alpha", "t_eval", "lifetime_hint", "lightcone_epsilon"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        if self.grid is not None:
            d["grid"] = self.grid.to_dict()
        if self.probe_point is not None:
            d["probe_point"] = list(self.probe_point)
        return d


def _get(d: dict, key: str, path: str):
    if key not in d:
        raise ConfigError(f"{path}.{key}: missing required field")
    return d[key]


def _float(value, path: str, positive: bool = False, nonneg: bool = False) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{path}: expected a number, got {value!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"{path}: must be finite")
    if positive and v <= 0:
        raise ConfigError(f"{path}: must be > 0")
    if nonneg and v < 0:
        raise ConfigError(f"{path}: must be >= 0")
    return v


def _vec(value, path: str) -> list:
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise ConfigError(f"{path}: expected a list of 3 numbers")
    return [_float(v, f"{path}[{i}]") for i, v in enumerate(value)]


def _load_default_quadrature() -> dict:
    path = os.environ.get(QUADRATURE_ENV_VAR)
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{QUADRATURE_ENV_VAR}={path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{QUADRATURE_ENV_VAR}={path}: expected a JSON object")
    return data


def parse_config(data: dict) -> RunConfig:
    """Validate a config dictionary and build a :class:`RunConfig`."""
    if not isinstance(data, dict):
        raise ConfigError("config: expected a JSON object")
    unknown = set(data) - _TOP_LEVEL
    if unknown:
        raise ConfigError(f"config: unknown field(s) {sorted(unknown)}")
    unit_system = data.get("units", "natural")
    if unit_system not in UNITS:
        raise ConfigError(f"config.units: expected one of {UNITS}, got {unit_system!r}")
    si = unit_system == "gaussian_from_si"

    atoms = _get(data, "atoms", "config")
    if not isinstance(atoms, dict):
        raise ConfigError("config.atoms: expected an object")
    r_a = _vec(_get(atoms, "r_A", "atoms"), "atoms.r_A")
    r_b = _vec(_get(atoms, "r_B", "atoms"), "atoms.r_B")
    mu_a = _vec(_get(atoms, "mu_A", "atoms"), "atoms.mu_A")
    mu_b = _vec(_get(atoms, "mu_B", "atoms"), "atoms.mu_B")
    k0 = _float(_get(atoms, "k0", "atoms"), "atoms.k0", positive=True)
    if si:
        r_a, r_b = units.length_si_to_gaussian(r_a), units.length_si_to_gaussian(r_b)
        mu_a, mu_b = units.dipole_si_to_gaussian(mu_a), units.dipole_si_to_gaussian(mu_b)
        k0 = units.wavenumber_si_to_gaussian(k0)
    try:
        pair = AtomPairConfig(r_a, r_b, mu_a, mu_b, k0)
        parity = DickeParity.parse(data.get("parity", "symmetric"))
        mode = CouplingMode.parse(data.get("mode", "full"))
    except ResonanceError as exc:
        raise ConfigError(f"config: {exc}") from exc

    tg = _get(data, "time_grid", "config")
    if not isinstance(tg, dict):
        raise ConfigError("config.time_grid: expected an object")
    t_start = _float(_get(tg, "t_start", "time_grid"), "time_grid.t_start", nonneg=True)
    t_end = _float(_get(tg, "t_end", "time_grid"), "time_grid.t_end", nonneg=True)
    n = _get(tg, "n_samples", "time_grid")
    if not isinstance(n, int) or isinstance(n, bool):
        raise ConfigError("time_grid.n_samples: expected an integer")
    if si:
        t_start, t_end = float(units.time_si_to_length(t_start)), float(units.time_si_to_length(t_end))
    time_grid = TimeGrid(t_start, t_end, n)

    grid = None
    if data.get("grid") is not None:
        g = data["grid"]
        try:
            if si:
                g = dict(g)
                g["origin"] = units.length_si_to_gaussian(g["origin"]).tolist()
                g["extents"] = units.length_si_to_gaussian(g["extents"]).tolist()
            grid = GridSpec.from_dict(g)
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"config.grid: malformed ({exc})") from exc
        except ResonanceError as exc:
            raise ConfigError(f"config.grid: {exc}") from exc

    alpha = None
    if data.get("alpha") is not None:
        alpha = _float(data["alpha"], "config.alpha", nonneg=True)
        if si:
            alpha = units.polarizability_si_to_gaussian(alpha) if alpha > 0 else 0.0
    probe_point = None
    if data.get("probe_point") is not None:
        probe_point = _vec(data["probe_point"], "config.probe_point")
        if si:
            probe_point = units.length_si_to_gaussian(probe_point).tolist()
        probe_point = tuple(probe_point)
    t_eval = None
    if data.get("t_eval") is not None:
        t_eval = _float(data["t_eval"], "config.t_eval", nonneg=True)
        if si:
            t_eval = float(units.time_si_to_length(t_eval))
    lifetime = None
    if data.get("lifetime_hint") is not None:
        lifetime = _float(data["lifetime_hint"], "config.lifetime_hint", positive=True)
        if si:
            lifetime = float(units.time_si_to_length(lifetime))
    eps = None
    if data.get("lightcone_epsilon") is not None:
        eps = _float(data["lightcone_epsilon"], "config.lightcone_epsilon", positive=True)

    qd = _load_default_quadrature()
    qd.update(data.get("quadrature") or {})
    try:
        quad = QuadratureSettings.from_dict(qd)
        quad.resolve(pair.k0)
    except TypeError as exc:
        raise ConfigError(f"config.quadrature: {exc}") from exc
    except ResonanceError as exc:
        raise ConfigError(f"config.quadrature: {exc}") from exc

    return RunConfig(pair, parity, mode, unit_system, time_grid, grid, alpha, probe_point,
                     t_eval, quad, lifetime, eps)


def loads(text: str) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_config(data)


def load(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from exc
    return loads(text)


def dumps(cfg: RunConfig) -> str:
    """Serialize a natural-units config; re-parsing gives an identical config."""
    if cfg.units != "natural":
        d = copy.deepcopy(cfg.to_dict())
        d["units"] = "natural"  # values are already converted
        return json.dumps(d, sort_keys=True, indent=2)
    return json.dumps(cfg.to_dict(), sort_keys=True, indent=2)
