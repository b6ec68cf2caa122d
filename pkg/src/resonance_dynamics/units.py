"""SI <-> Gaussian conversions and the order-of-magnitude resonance force estimate."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .resonance import AtomPairConfig, DickeParity, delta_e_stationary

SPEED_OF_LIGHT_CGS = 2.99792458e10  # cm/s
COULOMB_METRE_TO_STATC_CM = 2.99792458e11
METRE_TO_CM = 100.0
DYNE_TO_NEWTON = 1e-5
# alpha[cm^3] = alpha[C m^2 / V] / (4 pi eps0) * 1e6
VACUUM_PERMITTIVITY = 8.8541878128e-12


def dipole_si_to_gaussian(mu_si):
    return np.asarray(mu_si, dtype=float) * COULOMB_METRE_TO_STATC_CM


def length_si_to_gaussian(x_si):
    return np.asarray(x_si, dtype=float) * METRE_TO_CM


def wavenumber_si_to_gaussian(k_si: float) -> float:
    return float(k_si) / METRE_TO_CM


def time_si_to_length(t_si):
    """Seconds to c*t in cm (the working time unit with c = 1)."""
    return np.asarray(t_si, dtype=float) * SPEED_OF_LIGHT_CGS


def polarizability_si_to_gaussian(alpha_si: float) -> float:
    return float(alpha_si) / (4.0 * math.pi * VACUUM_PERMITTIVITY) * 1e6


@dataclass(frozen=True)
class SIEstimateInput:
    """Inputs in SI: dipole (C m), wavenumber (1/m), separation (m).

    ``orientation`` places both dipoles perpendicular or parallel to the
    interatomic axis.  ``alpha_SI`` (C m^2/V) is carried for probe estimates
    and does not enter the pair force.
    """

    mu_SI: float
    k0_SI: float
    R_SI: float
    alpha_SI: float | None = None
    parity: DickeParity = DickeParity.SYMMETRIC
    orientation: str = "perpendicular"

    def __post_init__(self):
        for name in ("mu_SI", "k0_SI", "R_SI"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive, got {v!r}")
        if self.alpha_SI is not None and not float(self.alpha_SI) > 0:
            raise DomainError("alpha_SI must be positive")
        if self.orientation not in ("perpendicular", "parallel"):
            raise DomainError(f"orientation must be 'perpendicular' or 'parallel', got {self.orientation!r}")


def _pair_energy(R_cm: float, mu: float, k0: float, parity: DickeParity, orientation: str) -> float:
    d = np.array([0.0, 0.0, mu]) if orientation == "perpendicular" else np.array([mu, 0.0, 0.0])
    cfg = AtomPairConfig((R_cm, 0.0, 0.0), (0.0, 0.0, 0.0), d, d, k0)
    return delta_e_stationary(cfg, parity)


def si_force_estimate(inp: SIEstimateInput) -> float:
    """Stationary resonance force ``-dE/dR`` in newtons (positive = repulsive)."""
    mu = float(dipole_si_to_gaussian(inp.mu_SI))
    k0 = wavenumber_si_to_gaussian(inp.k0_SI)
    R = float(length_si_to_gaussian(inp.R_SI))
    h = 1e-5 * R
    e_plus = _pair_energy(R + h, mu, k0, inp.parity, inp.orientation)
    e_minus = _pair_energy(R - h, mu, k0, inp.parity, inp.orientation)
    force_dyn = -(e_plus - e_minus) / (2.0 * h)
    return force_dyn * DYNE_TO_NEWTON
