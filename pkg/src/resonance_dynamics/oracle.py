"""Direct numerical evaluation of the frequency integrals behind the resonance energy.

Everything reduces to one primitive,

    T(omega, phi, p) = PV int_0^inf sin(omega k + phi) / (k - p) dk,

obtained from products like ``sin(kR) cos((k - k0) t)`` by product-to-sum
identities.  Two independent evaluation routes are provided:

``method="pv"``
    Composite Gauss-Legendre on panels no longer than half an oscillation
    period, graded geometrically towards the pole.  The pole is handled by a
    symmetric window ``[p - w, p + w]`` on which ``f(p)/(k - p)`` is
    subtracted (it integrates to zero there).  Beyond ``k_max`` the integral
    is summed over half-periods and the alternating series is accelerated by
    repeated averaging of partial sums (Euler transform).
    R-derivatives use the Abel-summed identities
    ``int k cos(omega k+phi)/(k-p) = -sin(phi)/omega + p T(omega, phi+pi/2, p)``
    and the analogous one for ``k^2 sin``.

``method="eta"``
    The integrand (and its R-derivatives, differentiated under the integral)
    is damped by ``exp(-eta k)`` and integrated to where the damping is
    negligible; the result is Richardson-extrapolated to ``eta -> 0``.

Nothing here uses sine or cosine integrals, so these routes are independent
of the closed forms in :mod:`resonance_dynamics.resonance`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple

import numpy as np

from .errors import ConvergenceError, DomainError, LightConeSingularity
from .resonance import AtomPairConfig, CouplingMode, DickeParity, radial_derivatives
from .tensor import contract, radial_operator_tensor

EPS = 2.220446049250313e-16
# The eta route's error estimate is the last Richardson correction, which
# overstates the true error by 1-2 orders; it is held to this looser target.
ETA_TARGET_FLOOR = 1e-4

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
_GL_NODES_LO, _GL_WEIGHTS_LO = np.polynomial.legendre.leggauss(12)


@dataclass(frozen=True)
class QuadratureSettings:
    """Numerical parameters of the oracle.

    ``None`` fields are filled from ``k0`` by :meth:`resolve`:
    ``k_max = 400 k0``, ``pole_excision_halfwidth = 1e-3 k0`` and
    ``convergence_factor_eta = (0.02, 0.01, 0.005) k0``.
    """

    pole_excision_halfwidth: float | None = None
    k_max: float | None = None
    convergence_factor_eta: tuple | None = None
    period_partitions: int = 64
    target_rel_error: float = 1e-6
    cone_guard: float = 1e-6  # relative to R

    def resolve(self, k0: float) -> "QuadratureSettings":
        s = replace(
            self,
            pole_excision_halfwidth=(
                1e-3 * k0 if self.pole_excision_halfwidth is None else float(self.pole_excision_halfwidth)
            ),
            k_max=400.0 * k0 if self.k_max is None else float(self.k_max),
            convergence_factor_eta=tuple(
                float(e) for e in (
                    (0.02 * k0, 0.01 * k0, 0.005 * k0)
                    if self.convergence_factor_eta is None
                    else self.convergence_factor_eta
                )
            ),
        )
        s.validate(k0)
        return s

    def validate(self, k0: float) -> None:
        if not self.pole_excision_halfwidth > 0:
            raise DomainError("pole_excision_halfwidth must be > 0")
        if not self.k_max > 100.0 * k0:
            raise DomainError(f"k_max must exceed 100 k0 = {100 * k0:g}")
        if not self.target_rel_error >= 1e-6:
            raise DomainError("target_rel_error must be >= 1e-6")
        if int(self.period_partitions) < 2:
            raise DomainError("period_partitions must be >= 2")
        if len(self.convergence_factor_eta) < 2 or min(self.convergence_factor_eta) <= 0:
            raise DomainError("convergence_factor_eta needs >= 2 positive values")

    def to_dict(self) -> dict:
        return {
            "pole_excision_halfwidth": self.pole_excision_halfwidth,
            "k_max": self.k_max,
            "convergence_factor_eta": (
                None if self.convergence_factor_eta is None else list(self.convergence_factor_eta)
            ),
            "period_partitions": self.period_partitions,
            "target_rel_error": self.target_rel_error,
            "cone_guard": self.cone_guard,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QuadratureSettings":
        d = dict(d)
        if d.get("convergence_factor_eta") is not None:
            d["convergence_factor_eta"] = tuple(d["convergence_factor_eta"])
        return cls(**d)


class QuadratureResult(NamedTuple):
    value: float
    error: float


# -- panel construction -----------------------------------------------------


def _grade(a: float, b: float, sing: float, cap: float) -> np.ndarray:
    """Panel edges on [a, b]: widths <= cap and <= half the distance to ``sing``."""
    if sing <= a:
        edges = [a]
        x = a
        while x < b:
            w = min(cap, 0.5 * (x - sing))
            if w >= cap or x + w >= b:
                n = max(1, math.ceil((b - x) / cap))
                edges.extend(np.linspace(x, b, n + 1)[1:])
                break
            x += w
            edges.append(x)
        return np.asarray(edges)
    # sing >= b: mirror
    mirrored = _grade(-b, -a, -sing, cap)
    return -mirrored[::-1]


def _gl_sum(f: Callable, edges: np.ndarray, sing: float | None = None) -> tuple[float, float]:
    """Composite Gauss-Legendre of f(k) / (k - sing) (or f alone) over edges."""
    if edges.size < 2:
        return 0.0, 0.0
    a, b = edges[:-1, None], edges[1:, None]
    half, mid = 0.5 * (b - a), 0.5 * (b + a)

    def rule(nodes, weights):
        k = mid + half * nodes
        vals = f(k)
        if sing is not None:
            vals = vals / (k - sing)
        return float(np.sum(half * weights * vals)), float(np.sum(np.abs(half * weights * vals)))

    hi, mag = rule(_GL_NODES, _GL_WEIGHTS)
    lo, _ = rule(_GL_NODES_LO, _GL_WEIGHTS_LO)
    return hi, abs(hi - lo) + 8.0 * EPS * mag


def _window_sum(f: Callable, p: float, w: float) -> tuple[float, float]:
    """int_{p-w}^{p+w} (f(k) - f(p)) / (k - p) dk; the subtracted part has zero PV."""
    fp = f(np.array([p]))[0]

    def g(k):
        return (f(k) - fp) / (k - p)

    edges = np.array([p - w, p, p + w])
    return _gl_sum(g, edges)


def _pv_finite(f: Callable, p: float, upper: float, s: QuadratureSettings, cap: float) -> tuple[float, float]:
    """PV int_0^upper f(k)/(k-p) dk."""
    total = err = 0.0
    if 0.0 < p < upper:
        w = min(s.pole_excision_halfwidth, 0.5 * p, 0.5 * (upper - p))
        for part in (
            _gl_sum(f, _grade(0.0, p - w, p, cap), p),
            _window_sum(f, p, w),
            _gl_sum(f, _grade(p + w, upper, p, cap), p),
        ):
            total += part[0]
            err += part[1]
        return total, err
    if p <= 0.0:
        return _gl_sum(f, _grade(0.0, upper, p, cap), p)
    raise DomainError("pole beyond the direct integration range")


def _euler_limit(partial_sums: np.ndarray) -> tuple[float, float]:
    """Limit of an alternating series from its partial sums by repeated averaging."""
    arr = np.asarray(partial_sums, dtype=float)
    prev = arr[-1]
    while arr.size > 1:
        prev = arr[-1]
        arr = 0.5 * (arr[:-1] + arr[1:])
    return float(arr[0]), float(abs(arr[0] - prev))


def _pv_sine(omega: float, phase: float, p: float, s: QuadratureSettings) -> tuple[float, float]:
    """T(omega, phase, p) by the principal-value route."""
    if omega == 0.0:
        raise DomainError("zero frequency: the integral does not converge")
    sign = 1.0
    if omega < 0.0:
        omega, phase, sign = -omega, -phase, -1.0

    def f(k):
        return np.sin(omega * k + phase)

    half_period = math.pi / omega
    # first zero of sin(omega k + phase) at or past k_max, and past the pole window
    start = max(s.k_max, p + 4.0 * s.pole_excision_halfwidth)
    n0 = math.ceil((omega * start + phase) / math.pi)
    K = (n0 * math.pi - phase) / omega
    direct, err = _pv_finite(f, p, K, s, half_period)

    zeros = (np.arange(n0, n0 + s.period_partitions + 1) * math.pi - phase) / omega
    terms = np.empty(s.period_partitions)
    for i in range(s.period_partitions):
        val, e = _gl_sum(f, _grade(zeros[i], zeros[i + 1], p, half_period), p)
        terms[i] = val
        err += e
    tail, tail_err = _euler_limit(np.cumsum(terms))
    err += tail_err
    return sign * (direct + tail), err


def _eta_moments(omega: float, phase: float, p: float, eta: float, s: QuadratureSettings, cap_scale: float):
    """Damped integrals of k^m trig(omega k + phase)/(k - p), m = 0, 1, 2.

    Returns [(int sin/(k-p)), (int k cos/(k-p)), (int -k^2 sin/(k-p))] each as (value, err).
    """
    k_end = 38.0 / eta
    cap = min(math.pi / abs(omega), cap_scale)
    out = []
    funcs = (
        lambda k: np.sin(omega * k + phase) * np.exp(-eta * k),
        lambda k: k * np.cos(omega * k + phase) * np.exp(-eta * k),
        lambda k: -k * k * np.sin(omega * k + phase) * np.exp(-eta * k),
    )
    for f in funcs:
        out.append(_pv_finite(f, p, k_end, s, cap))
    return out


def _neville_at_zero(xs, ys) -> float:
    xs = list(xs)
    ps = list(ys)
    n = len(xs)
    for level in range(1, n):
        for i in range(n - level):
            j = i + level
            ps[i] = (xs[j] * ps[i] - xs[i] * ps[i + 1]) / (xs[j] - xs[i])
    return ps[0]


# -- terms of the energy integral ------------------------------------------


def _check_scalars(R: float, k0: float) -> tuple[float, float]:
    R, k0 = float(R), float(k0)
    if not (math.isfinite(R) and R > 0):
        raise DomainError(f"R must be > 0, got {R!r}")
    if not (math.isfinite(k0) and k0 > 0):
        raise DomainError(f"k0 must be > 0, got {k0!r}")
    return R, k0


def _check_cone(R: float, t: float, s: QuadratureSettings) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0:
        raise DomainError(f"t must be finite and >= 0, got {t!r}")
    if abs(t - R) < s.cone_guard * R:
        raise LightConeSingularity(f"|t - R| = {abs(t - R):.3g} is inside the oracle cone guard")
    return t


def _terms(R: float, k0: float, t: float, lam2: int) -> list[tuple[float, float, float, float]]:
    """(coefficient, omega, phase, pole) of the k-integral multiplying sin... in the energy.

    rotating:        sin(kR) (1 - cos((k - k0) t)) / (k - k0)
    counterrotating: sin(kR) (1 - cos((k + k0) t)) / (k + k0), weighted by lambda^2
    """
    terms = [
        (1.0, R, 0.0, k0),
        (-0.5, R + t, -k0 * t, k0),
        (-0.5, R - t, k0 * t, k0),
    ]
    if lam2:
        terms += [
            (1.0, R, 0.0, -k0),
            (-0.5, R + t, k0 * t, -k0),
            (-0.5, R - t, -k0 * t, -k0),
        ]
    # t = 0 terms cancel; drop zero-frequency pieces that would not converge
    return [term for term in terms if term[1] != 0.0]


def _radial_pv(terms, s: QuadratureSettings) -> tuple[list[float], float]:
    """J, dJ/dR, d2J/dR2 and an error bound (on J'') via the PV route."""
    J = [0.0, 0.0, 0.0]
    err = 0.0
    for coef, omega, phase, p in terms:
        t0, e0 = _pv_sine(omega, phase, p, s)
        tc, ec = _pv_sine(omega, phase + 0.5 * math.pi, p, s)
        a1 = -math.sin(phase) / omega
        b0 = math.cos(phase) / omega
        b1 = -math.sin(phase) / omega**2
        J[0] += coef * t0
        J[1] += coef * (a1 + p * tc)
        J[2] += coef * -(b1 + p * b0 + p * p * t0)
        err += abs(coef) * (e0 * (1 + p * p) + abs(p) * ec)
    return J, err


def _radial_eta(terms, s: QuadratureSettings, k0: float) -> tuple[list[float], float]:
    """Same as :func:`_radial_pv` through exp(-eta k) damping and Richardson extrapolation."""
    etas = sorted(s.convergence_factor_eta, reverse=True)
    per_eta = []
    quad_err = 0.0
    for eta in etas:
        J = [0.0, 0.0, 0.0]
        for coef, omega, phase, p in terms:
            moments = _eta_moments(omega, phase, p, eta, s, cap_scale=2.0 / k0)
            for m in range(3):
                J[m] += coef * moments[m][0]
                quad_err += abs(coef) * moments[m][1]
        per_eta.append(J)
    out, extrap_err = [], 0.0
    for m in range(3):
        ys = [row[m] for row in per_eta]
        full = _neville_at_zero(etas, ys)
        fewer = _neville_at_zero(etas[1:], ys[1:])
        out.append(full)
        extrap_err = max(extrap_err, abs(full - fewer))
    return out, extrap_err + quad_err


def _radial(terms, s, k0, method):
    if method == "pv":
        return _radial_pv(terms, s)
    if method == "eta":
        return _radial_eta(terms, s, k0)
    raise DomainError(f"unknown quadrature method {method!r}")


def _finish(value, err, scale, s: QuadratureSettings, what: str, return_error: bool, floor: float = 0.0):
    if err > max(s.target_rel_error, floor) * max(abs(value), scale):
        raise ConvergenceError(
            f"{what}: estimated error {err:.3g} above target", best_estimate=value, error_estimate=err
        )
    return QuadratureResult(value, err) if return_error else value


# -- public operations -------------------------------------------------------


def integral_I1(R: float, k0: float, settings: QuadratureSettings | None = None, return_error: bool = False):
    """PV int_0^inf sin(kR) [1/(k - k0) + 1/(k + k0)] dk  (closed form: pi cos(k0 R))."""
    R, k0 = _check_scalars(R, k0)
    s = (settings or QuadratureSettings()).resolve(k0)
    a, ea = _pv_sine(R, 0.0, k0, s)
    b, eb = _pv_sine(R, 0.0, -k0, s)
    return _finish(a + b, ea + eb, abs(a) + abs(b), s, "I1", return_error)


def integral_I2(R: float, k0: float, t: float, settings: QuadratureSettings | None = None, return_error: bool = False):
    """PV int_0^inf sin(kR) [cos((k-k0)t)/(k-k0) + cos((k+k0)t)/(k+k0)] dk.

    Closed form: pi cos(k0 R) before the light cone (t < R), zero after it.
    """
    R, k0 = _check_scalars(R, k0)
    s = (settings or QuadratureSettings()).resolve(k0)
    t = _check_cone(R, t, s)
    pieces = [
        (R + t, -k0 * t, k0),
        (R - t, k0 * t, k0),
        (R + t, k0 * t, -k0),
        (R - t, -k0 * t, -k0),
    ]
    total = err = scale = 0.0
    for omega, phase, p in pieces:
        if omega == 0.0:
            continue
        v, e = _pv_sine(omega, phase, p, s)
        total += 0.5 * v
        err += 0.5 * e
        scale += 0.5 * abs(v)
    return _finish(total, err, scale, s, "I2", return_error)


def radial_integral(R: float, k0: float, t: float, mode: CouplingMode,
                    settings: QuadratureSettings | None = None, method: str = "pv"):
    """The scalar k-integral of the energy and its first two R-derivatives.

    Returns ``([J, J', J''], error)`` for the integrand
    ``sin(kR) [(1 - cos((k-k0)t))/(k-k0) + lambda^2 (1 - cos((k+k0)t))/(k+k0)]``.
    """
    R, k0 = _check_scalars(R, k0)
    s = (settings or QuadratureSettings()).resolve(k0)
    t = _check_cone(R, t, s)
    lam2 = CouplingMode.parse(mode).lam ** 2
    return _radial(_terms(R, k0, t, lam2), s, k0, method)


def delta_e_quadrature(
    t: float,
    cfg: AtomPairConfig,
    parity: DickeParity,
    mode: CouplingMode,
    settings: QuadratureSettings | None = None,
    method: str = "pv",
    return_error: bool = False,
):
    """Resonance energy from direct quadrature of the frequency integral.

    The dipole operator is applied to ``J(R)/R`` through the radial formula of
    :mod:`resonance_dynamics.tensor`, using quadrature values of J, J', J''.
    """
    R, k0 = cfg.distance, cfg.k0
    s = (settings or QuadratureSettings()).resolve(k0)
    (J, dJ, d2J), jerr = radial_integral(R, k0, t, mode, s, method)
    _, h1, h2 = radial_derivatives(J, dJ, d2J, R)
    T = radial_operator_tensor(h1, h2, cfg.separation)
    value = -parity.sign / math.pi * contract(T, cfg.mu_A, cfg.mu_B)
    # crude propagation: each derivative error enters through at most 1/R
    mu2 = float(np.linalg.norm(cfg.mu_A) * np.linalg.norm(cfg.mu_B))
    err = 2.0 * mu2 * jerr * (1.0 / R + 2.0 / R**2 + 2.0 / R**3 + 1.0 / R**4) / math.pi
    scale = mu2 * (k0**2 / R + k0 / R**2 + 1.0 / R**3)
    floor = ETA_TARGET_FLOOR if method == "eta" else 0.0
    return _finish(value, err, scale, s, "delta_e_quadrature", return_error, floor)
