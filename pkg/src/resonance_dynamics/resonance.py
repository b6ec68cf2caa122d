"""Time-dependent resonance interaction energy of two atoms in a Dicke state.

Natural units with c = 1 are used throughout: times are measured in the same
length units as the positions, and ``k0`` is the transition wavenumber.

The frequency integral of the rotating (RWA) and counterrotating terms can be
written with a single bracket

    D(R, t) = sin(k0 R) [2 Ci(k0 R) - Ci(k0|R - t|) - Ci(k0 (R + t))]
            - cos(k0 R) [2 si(k0 R) -/+ si(k0|R - t|) - si(k0 (R + t))]

(minus before the cone, plus after it), giving

    J_rot = pi cos(k0 R) theta(t - R) - D / 2,      J_cr = D / 2.

The energy is ``-(s/pi) mu_A F mu_B [J / R]`` with ``s = +1`` for the
symmetric state, and the dipole operator F needs the first two R-derivatives
of ``D/R``, which are available in closed form.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .errors import DomainError, LightConeSingularity, SingularityError
from .tensor import as_vec3, contract, potential_tensor, radial_operator_tensor

DEFAULT_LIGHTCONE_EPS = 1e-9


class DickeParity(enum.Enum):
    SYMMETRIC = 1
    ANTISYMMETRIC = -1

    @property
    def sign(self) -> int:
        return self.value

    @classmethod
    def parse(cls, value) -> "DickeParity":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        if key in ("symmetric", "superradiant", "+", "+1", "1"):
            return cls.SYMMETRIC
        if key in ("antisymmetric", "subradiant", "-", "-1"):
            return cls.ANTISYMMETRIC
        raise DomainError(f"unknown Dicke parity {value!r}")


class CouplingMode(enum.Enum):
    RWA = 0
    FULL = 1

    @property
    def lam(self) -> int:
        return self.value

    @classmethod
    def parse(cls, value) -> "CouplingMode":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        if key in ("rwa", "0"):
            return cls.RWA
        if key in ("full", "1"):
            return cls.FULL
        raise DomainError(f"unknown coupling mode {value!r}")


@dataclass(frozen=True)
class AtomPairConfig:
    """Two identical two-level atoms: positions, transition dipoles, wavenumber."""

    r_A: np.ndarray
    r_B: np.ndarray
    mu_A: np.ndarray
    mu_B: np.ndarray
    k0: float

    def __post_init__(self):
        for name in ("r_A", "r_B", "mu_A", "mu_B"):
            object.__setattr__(self, name, as_vec3(getattr(self, name), name))
        k0 = float(self.k0)
        if not math.isfinite(k0) or k0 <= 0.0:
            raise DomainError(f"k0 must be finite and > 0, got {self.k0!r}")
        object.__setattr__(self, "k0", k0)
        if self.distance <= 0.0:
            raise SingularityError("atoms A and B coincide")

    @property
    def separation(self) -> np.ndarray:
        """R = r_A - r_B."""
        return self.r_A - self.r_B

    @property
    def distance(self) -> float:
        return float(np.linalg.norm(self.r_A - self.r_B))

    def to_dict(self) -> dict:
        return {
            "r_A": self.r_A.tolist(),
            "r_B": self.r_B.tolist(),
            "mu_A": self.mu_A.tolist(),
            "mu_B": self.mu_B.tolist(),
            "k0": self.k0,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AtomPairConfig":
        return cls(d["r_A"], d["r_B"], d["mu_A"], d["mu_B"], d["k0"])

    def __eq__(self, other):
        if not isinstance(other, AtomPairConfig):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    __hash__ = None


@dataclass
class EnergyTrace:
    times: np.ndarray
    rwa: np.ndarray
    cr: np.ndarray
    total: np.ndarray
    stationary: float
    config: AtomPairConfig
    parity: DickeParity
    validity_warning: bool = False
    notes: list = field(default_factory=list)


def _check_time(t: float, R: float, eps_rel: float | None) -> tuple[float, float]:
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"time must be finite and >= 0, got {t!r}")
    eps = (DEFAULT_LIGHTCONE_EPS if eps_rel is None else float(eps_rel)) * R
    if abs(t - R) < eps:
        raise LightConeSingularity(
            f"|t - R| = {abs(t - R):.3g} is inside the light-cone guard band {eps:.3g}"
        )
    return t, eps


def dressing_bracket(R: float, t: float, k0: float) -> tuple[float, float, float]:
    """Return D(R, t) and its first two R-derivatives at fixed t (t != R)."""
    if t == 0.0:
        # Ci/si arguments coincide; D vanishes identically in R for t = 0
        return 0.0, 0.0, 0.0
    a = k0
    S, C = math.sin(a * R), math.cos(a * R)
    si_R, ci_R = specfun.si_ci(a * R)
    si_m, ci_m = specfun.si_ci(a * abs(R - t))
    si_p, ci_p = specfun.si_ci(a * (R + t))
    P = 2.0 * ci_R - ci_m - ci_p
    if t < R:
        Q = 2.0 * si_R - si_m - si_p
    else:
        Q = 2.0 * si_R + si_m - si_p
    D = S * P - C * Q
    G = C * P + S * Q
    diff2 = R * R - t * t
    sin_t, cos_t = math.sin(a * t), math.cos(a * t)
    E = -2.0 * t * sin_t / diff2
    d1 = a * G + E
    d2 = -a * a * D + a * (2.0 / R - 2.0 * R * cos_t / diff2) + 4.0 * t * R * sin_t / diff2**2
    return D, d1, d2


def radial_derivatives(J: float, dJ: float, d2J: float, R: float) -> tuple[float, float, float]:
    """Derivatives of h = J/R from those of J."""
    h = J / R
    h1 = dJ / R - J / R**2
    h2 = d2J / R - 2.0 * dJ / R**2 + 2.0 * J / R**3
    return h, h1, h2


def dressing_energy(t: float, cfg: AtomPairConfig) -> float:
    """``mu_A F mu_B [D/R] / (2 pi)``: the counterrotating energy for parity -1."""
    R = cfg.distance
    D, d1, d2 = dressing_bracket(R, t, cfg.k0)
    _, h1, h2 = radial_derivatives(D, d1, d2, R)
    T = radial_operator_tensor(h1, h2, cfg.separation)
    return contract(T, cfg.mu_A, cfg.mu_B) / (2.0 * math.pi)


def delta_e_stationary(cfg: AtomPairConfig, parity: DickeParity) -> float:
    """Stationary resonance energy ``s mu_A V mu_B``."""
    V = potential_tensor(cfg.k0, cfg.separation)
    return parity.sign * contract(V, cfg.mu_A, cfg.mu_B)


def delta_e(
    t: float,
    cfg: AtomPairConfig,
    parity: DickeParity,
    mode: CouplingMode,
    lightcone_epsilon: float | None = None,
) -> float:
    """Resonance interaction energy at time t after the bare state is prepared.

    ``lightcone_epsilon`` is relative to R; times closer than that to the
    light cone raise :class:`LightConeSingularity`.
    """
    R = cfg.distance
    t, _ = _check_time(t, R, lightcone_epsilon)
    s = parity.sign
    value = delta_e_stationary(cfg, parity) if t > R else 0.0
    lam2 = CouplingMode.parse(mode).lam ** 2
    if lam2 != 1:
        value += (1 - lam2) * s * dressing_energy(t, cfg)
    return value


def decompose(
    t: float,
    cfg: AtomPairConfig,
    parity: DickeParity,
    lightcone_epsilon: float | None = None,
) -> tuple[float, float]:
    """Split the full energy into rotating and counterrotating contributions."""
    rwa = delta_e(t, cfg, parity, CouplingMode.RWA, lightcone_epsilon)
    full = delta_e(t, cfg, parity, CouplingMode.FULL, lightcone_epsilon)
    return rwa, full - rwa


def energy_trace(
    times,
    cfg: AtomPairConfig,
    parity: DickeParity,
    lifetime: float | None = None,
    lightcone_epsilon: float | None = None,
) -> EnergyTrace:
    """Evaluate :func:`decompose` on a time grid (sorted ascending).

    If ``lifetime`` is given and the grid extends beyond a tenth of it, the
    trace is flagged (and a warning emitted): second-order perturbation theory
    only holds for times much shorter than the excited-state lifetime.
    """
    times = np.sort(np.asarray(times, dtype=float).ravel())
    rwa = np.empty_like(times)
    cr = np.empty_like(times)
    total = np.empty_like(times)
    for i, t in enumerate(times):
        rwa[i], cr[i] = decompose(t, cfg, parity, lightcone_epsilon)
        total[i] = delta_e(t, cfg, parity, CouplingMode.FULL, lightcone_epsilon)
    trace = EnergyTrace(times, rwa, cr, total, delta_e_stationary(cfg, parity), cfg, parity)
    if lifetime is not None and times.size and times[-1] > 0.1 * float(lifetime):
        msg = (
            f"t_end = {times[-1]:g} exceeds 0.1 x lifetime ({float(lifetime):g}); "
            "second-order results may not apply"
        )
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        trace.validity_warning = True
        trace.notes.append(msg)
    return trace


def split_cone_samples(times, R: float, lightcone_epsilon: float | None = None):
    """Partition a time grid into (usable, dropped) around the light-cone band."""
    times = np.asarray(times, dtype=float)
    eps = (DEFAULT_LIGHTCONE_EPS if lightcone_epsilon is None else lightcone_epsilon) * R
    bad = np.abs(times - R) < eps
    return times[~bad], times[bad]
