"""Electric energy density around the two atoms and the probe-atom energy and force.

The field radiated by atom X at the point r is the complex amplitude
``E_X = F[exp(i k0 R_X)/R_X] . mu_X`` with ``R_X = r - r_X``.  In terms of
these amplitudes the three parts of the energy density are

    h_X  = |E_X|^2 / (8 pi)                 theta(t - R_X)
    h_AB = +/- Re(E_A . conj(E_B)) / (4 pi) theta(t - R_A) theta(t - R_B)

The step is taken with theta(0) = 0.  Points closer than ``cone_epsilon * R_X``
to a light cone are refused, because the underlying model is singular there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, LightConeSingularity, SingularityError, StencilError
from .resonance import AtomPairConfig, DickeParity
from .tensor import as_vec3, dipole_field_tensor

DEFAULT_CONE_EPS = 1e-9

FLAG_OK = "ok"
FLAG_CONE = "cone"
FLAG_SINGULAR = "singular"


@dataclass(frozen=True)
class FieldMapSample:
    point: np.ndarray
    h_A: float
    h_B: float
    h_AB: float
    total: float
    inside_cone_A: bool
    inside_cone_B: bool
    flag: str = FLAG_OK


@dataclass(frozen=True)
class GridSpec:
    """Planar grid ``origin + u * axes[0] + v * axes[1]`` with u, v spanning the extents."""

    origin: np.ndarray
    axes: tuple
    extents: tuple
    resolution: tuple

    def __post_init__(self):
        object.__setattr__(self, "origin", as_vec3(self.origin, "origin"))
        axes = tuple(as_vec3(a, "axis") for a in self.axes)
        if len(axes) != 2:
            raise DomainError("a planar grid needs exactly two axes")
        gram = np.array([[a @ b for b in axes] for a in axes])
        if not np.allclose(gram, np.eye(2), rtol=0.0, atol=1e-12):
            raise DomainError("grid axes must be orthonormal")
        object.__setattr__(self, "axes", axes)
        extents = tuple(float(e) for e in self.extents)
        res = tuple(int(n) for n in self.resolution)
        if len(extents) != 2 or len(res) != 2:
            raise DomainError("extents and resolution need two entries")
        if min(res) < 2:
            raise DomainError("resolution must be >= 2 per axis")
        if not all(math.isfinite(e) for e in extents):
            raise DomainError("extents must be finite")
        object.__setattr__(self, "extents", extents)
        object.__setattr__(self, "resolution", res)

    def points(self) -> np.ndarray:
        """Grid points in row-major order (first axis outermost), shape (n0*n1, 3)."""
        u = np.linspace(0.0, self.extents[0], self.resolution[0])
        v = np.linspace(0.0, self.extents[1], self.resolution[1])
        uu, vv = np.meshgrid(u, v, indexing="ij")
        pts = self.origin + uu[..., None] * self.axes[0] + vv[..., None] * self.axes[1]
        return pts.reshape(-1, 3)

    def to_dict(self) -> dict:
        return {
            "origin": self.origin.tolist(),
            "axes": [a.tolist() for a in self.axes],
            "extents": list(self.extents),
            "resolution": list(self.resolution),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GridSpec":
        return cls(d["origin"], tuple(d["axes"]), tuple(d["extents"]), tuple(d["resolution"]))

    def __eq__(self, other):
        if not isinstance(other, GridSpec):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    __hash__ = None


def _atom(cfg: AtomPairConfig, atom: str) -> tuple[np.ndarray, np.ndarray]:
    key = str(atom).upper()
    if key == "A":
        return cfg.r_A, cfg.mu_A
    if key == "B":
        return cfg.r_B, cfg.mu_B
    raise DomainError(f"atom must be 'A' or 'B', got {atom!r}")


def _check_t(t: float) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"time must be finite and >= 0, got {t!r}")
    return t


def _inside_cone(point, t, position, cone_epsilon) -> bool:
    """theta(t - R) with theta(0) = 0; raises inside the guard band."""
    R = float(np.linalg.norm(point - position))
    if R < 1e-12:
        raise SingularityError("observation point coincides with an atom")
    eps = (DEFAULT_CONE_EPS if cone_epsilon is None else cone_epsilon) * R
    if abs(t - R) < eps:
        raise LightConeSingularity(f"point at |t - R| = {abs(t - R):.3g} from a light cone")
    return t > R


def field_amplitude(point, atom: str, cfg: AtomPairConfig) -> np.ndarray:
    """Complex field amplitude radiated by one atom at ``point`` (no causal step)."""
    position, mu = _atom(cfg, atom)
    T = dipole_field_tensor(cfg.k0, as_vec3(point, "point") - position)
    return T.entries @ mu


def single_atom_density(point, t: float, atom: str, cfg: AtomPairConfig, cone_epsilon: float | None = None) -> float:
    point = as_vec3(point, "point")
    t = _check_t(t)
    position, _ = _atom(cfg, atom)
    if not _inside_cone(point, t, position, cone_epsilon):
        return 0.0
    E = field_amplitude(point, atom, cfg)
    return float(np.vdot(E, E).real) / (8.0 * math.pi)


def interference_density(point, t: float, cfg: AtomPairConfig, parity: DickeParity,
                         cone_epsilon: float | None = None) -> float:
    point = as_vec3(point, "point")
    t = _check_t(t)
    in_a = _inside_cone(point, t, cfg.r_A, cone_epsilon)
    in_b = _inside_cone(point, t, cfg.r_B, cone_epsilon)
    if not (in_a and in_b):
        return 0.0
    E_A = field_amplitude(point, "A", cfg)
    E_B = field_amplitude(point, "B", cfg)
    return parity.sign * float(np.vdot(E_B, E_A).real) / (4.0 * math.pi)


def total_density(point, t: float, cfg: AtomPairConfig, parity: DickeParity,
                  cone_epsilon: float | None = None) -> FieldMapSample:
    """Electric energy density at ``point`` and its decomposition."""
    point = as_vec3(point, "point")
    t = _check_t(t)
    in_a = _inside_cone(point, t, cfg.r_A, cone_epsilon)
    in_b = _inside_cone(point, t, cfg.r_B, cone_epsilon)
    h_a = single_atom_density(point, t, "A", cfg, cone_epsilon)
    h_b = single_atom_density(point, t, "B", cfg, cone_epsilon)
    h_ab = interference_density(point, t, cfg, parity, cone_epsilon)
    return FieldMapSample(point, h_a, h_b, h_ab, h_a + h_b + h_ab, in_a, in_b)


def field_map(grid: GridSpec, t: float, cfg: AtomPairConfig, parity: DickeParity,
              cone_epsilon: float | None = None) -> list[FieldMapSample]:
    """Evaluate :func:`total_density` on a grid; bad points are flagged, not fatal."""
    t = _check_t(t)
    out = []
    nan = float("nan")
    for p in grid.points():
        try:
            out.append(total_density(p, t, cfg, parity, cone_epsilon))
        except LightConeSingularity:
            ra = float(np.linalg.norm(p - cfg.r_A))
            rb = float(np.linalg.norm(p - cfg.r_B))
            out.append(FieldMapSample(p, nan, nan, nan, nan, t > ra, t > rb, FLAG_CONE))
        except SingularityError:
            out.append(FieldMapSample(p, nan, nan, nan, nan, False, False, FLAG_SINGULAR))
    return out


def uncorrelated_density(point, t: float, cfg: AtomPairConfig, cone_epsilon: float | None = None) -> float:
    """Reference density of a factorized pair: h_A + h_B, interference dropped."""
    return (single_atom_density(point, t, "A", cfg, cone_epsilon)
            + single_atom_density(point, t, "B", cfg, cone_epsilon))


def probe_energy(point, alpha: float, t: float, cfg: AtomPairConfig, parity: DickeParity | None,
                 cone_epsilon: float | None = None) -> float:
    """Far-zone Casimir-Polder energy ``-(alpha/2) <E^2>`` of a polarizable probe.

    ``<E^2> = 8 pi x (energy density)``.  Passing ``parity=None`` gives the
    energy for an uncorrelated pair (interference term dropped).
    """
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise DomainError("alpha must be finite")
    if parity is None:
        density = uncorrelated_density(point, t, cfg, cone_epsilon)
    else:
        density = total_density(point, t, cfg, parity, cone_epsilon).total
    return -0.5 * alpha * 8.0 * math.pi * density


def probe_force(point, alpha: float, t: float, cfg: AtomPairConfig, parity: DickeParity | None,
                cone_epsilon: float | None = None) -> np.ndarray:
    """Force on the probe, ``-grad probe_energy`` by central differences.

    The step is ``1e-4 * min(R_A, R_B)``.  A stencil that crosses a light cone
    raises :class:`StencilError`.
    """
    point = as_vec3(point, "point")
    t = _check_t(t)
    ra = float(np.linalg.norm(point - cfg.r_A))
    rb = float(np.linalg.norm(point - cfg.r_B))
    h = 1e-4 * min(ra, rb)
    if h <= 0.0:
        raise SingularityError("probe placed on an atom")
    centre = (_inside_cone(point, t, cfg.r_A, cone_epsilon), _inside_cone(point, t, cfg.r_B, cone_epsilon))
    force = np.zeros(3)
    for i in range(3):
        step = np.zeros(3)
        step[i] = h
        values = []
        for q in (point + step, point - step):
            try:
                status = (_inside_cone(q, t, cfg.r_A, cone_epsilon), _inside_cone(q, t, cfg.r_B, cone_epsilon))
            except LightConeSingularity as exc:
                raise StencilError(f"stencil point {q} is on a light cone") from exc
            if status != centre:
                raise StencilError(f"stencil around {point} crosses a light-cone boundary")
            values.append(probe_energy(q, alpha, t, cfg, parity, cone_epsilon))
        force[i] = (values[1] - values[0]) / (2.0 * h)
    return force
