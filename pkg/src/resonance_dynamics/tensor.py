"""Closed forms of the transverse dipole operator ``-delta_lm nabla^2 + nabla_l nabla_m``.

For any radial function ``h(R)`` the operator reduces to

    F_lm h = -(delta_lm - Rhat_l Rhat_m) h'' - (delta_lm + Rhat_l Rhat_m) h'/R,

which is what :func:`radial_operator_tensor` evaluates.  The potential tensor
and the complex field tensor below are this formula specialised to
``cos(kR)/R`` and ``exp(ikR)/R``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError

MIN_SEPARATION = 1e-12

IDENTITY = np.eye(3)


def as_vec3(v, name: str = "vector") -> np.ndarray:
    """Validate and convert ``v`` to a finite float array of shape (3,)."""
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise DomainError(f"{name} must have 3 components, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite components: {arr}")
    return arr


def unit_and_norm(Rvec) -> tuple[np.ndarray, float]:
    Rvec = as_vec3(Rvec, "separation")
    R = float(np.linalg.norm(Rvec))
    if R < MIN_SEPARATION:
        raise SingularityError(f"separation |R| = {R:g} is below {MIN_SEPARATION:g}")
    return Rvec / R, R


def _check_wavenumber(k: float) -> float:
    k = float(k)
    if not np.isfinite(k) or k < 0.0:
        raise DomainError(f"wavenumber must be finite and >= 0, got {k!r}")
    return k


@dataclass(frozen=True)
class PotentialTensor:
    entries: np.ndarray
    k0: float
    Rvec: np.ndarray


@dataclass(frozen=True)
class DipoleFieldTensor:
    entries: np.ndarray
    k: float
    Rvec: np.ndarray


def projectors(Rhat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (delta - Rhat Rhat, delta - 3 Rhat Rhat)."""
    rr = np.outer(Rhat, Rhat)
    return IDENTITY - rr, IDENTITY - 3.0 * rr


def radial_operator_tensor(d1: float, d2: float, Rvec) -> np.ndarray:
    """Apply the dipole operator to a radial function given h'(R) and h''(R)."""
    Rhat, R = unit_and_norm(Rvec)
    rr = np.outer(Rhat, Rhat)
    return -(IDENTITY - rr) * d2 - (IDENTITY + rr) * (d1 / R)


def potential_tensor(k0: float, Rvec) -> PotentialTensor:
    """Stationary resonance potential tensor ``-F_lm[cos(k0 R)/R]``."""
    k0 = _check_wavenumber(k0)
    Rhat, R = unit_and_norm(Rvec)
    transverse, static = projectors(Rhat)
    kr = k0 * R
    c, s = np.cos(kr), np.sin(kr)
    entries = (static * (c + kr * s) - transverse * (kr * kr * c)) / R**3
    return PotentialTensor(entries, k0, np.array(Rvec, dtype=float))


def dipole_field_tensor(k: float, Rvec) -> DipoleFieldTensor:
    """``F_lm[exp(ikR)/R]``: the field of a unit dipole oscillating at wavenumber k.

    Contracting with a dipole vector gives the (complex amplitude of the)
    electric field at ``Rvec`` relative to the source.
    """
    k = _check_wavenumber(k)
    Rhat, R = unit_and_norm(Rvec)
    transverse, static = projectors(Rhat)
    phase = np.exp(1j * k * R)
    entries = phase * (transverse * (k * k / R) - static * (1.0 / R**3 - 1j * k / R**2))
    return DipoleFieldTensor(entries, k, np.array(Rvec, dtype=float))


def contract(T, a, b):
    """Index contraction ``a_l T_lm b_m``; returns complex for complex tensors."""
    entries = T.entries if hasattr(T, "entries") else np.asarray(T)
    val = as_vec3(a, "a") @ entries @ as_vec3(b, "b")
    if np.iscomplexobj(entries):
        return complex(val)
    return float(val)
