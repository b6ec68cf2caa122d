import math

import numpy as np
import pytest

from resonance_dynamics import (
    AtomPairConfig,
    ConvergenceError,
    CouplingMode,
    DickeParity,
    DomainError,
    LightConeSingularity,
    QuadratureSettings,
    delta_e,
    delta_e_quadrature,
    delta_e_stationary,
    integral_I1,
    integral_I2,
)
from resonance_dynamics.oracle import radial_integral

SYM, ANTI = DickeParity.SYMMETRIC, DickeParity.ANTISYMMETRIC
FULL, RWA = CouplingMode.FULL, CouplingMode.RWA

PI_COS_20 = 1.2820276074547281612  # pi cos(20), mpmath


def random_pairs(n, seed):
    rng = np.random.default_rng(seed)
    k0 = rng.uniform(0.2, 3.0, n)
    R = rng.uniform(5.0, 100.0, n) / k0
    return list(zip(k0, R))


def test_I1_frozen():
    assert integral_I1(20.0, 1.0) == pytest.approx(PI_COS_20, rel=1e-10)
    assert integral_I1(math.pi, 1.0) == pytest.approx(-math.pi, rel=1e-10)


@pytest.mark.parametrize("k0, R", random_pairs(6, seed=11))
def test_I1_closed_form(k0, R):
    res = integral_I1(R, k0, return_error=True)
    assert res.value == pytest.approx(math.pi * math.cos(k0 * R), rel=1e-8, abs=1e-10)
    assert res.error < 1e-10


@pytest.mark.parametrize("frac", [0.1, 0.5, 0.975])
def test_I2_before_cone(frac):
    R, k0 = 20.0, 1.0
    assert integral_I2(R, k0, frac * R) == pytest.approx(PI_COS_20, rel=1e-9)


@pytest.mark.parametrize("frac", [1.025, 2.0, 10.0])
def test_I2_after_cone(frac):
    assert abs(integral_I2(20.0, 1.0, frac * 20.0)) < 1e-10


def test_pole_subtraction_is_bounded():
    # (sin(kR) - sin(k0 R)) / (k - k0) stays bounded by R across the pole
    R, k0, w = 20.0, 1.0, 1e-3
    k = k0 + np.linspace(-w, w, 4001)
    k = k[k != k0]
    g = (np.sin(k * R) - np.sin(k0 * R)) / (k - k0)
    assert np.all(np.isfinite(g))
    assert np.abs(g).max() <= R


@pytest.mark.parametrize("k0, R", random_pairs(3, seed=5))
def test_refinement_within_error_estimate(k0, R):
    base = QuadratureSettings()
    fine = QuadratureSettings(k_max=800 * k0, period_partitions=128)
    for fn in (lambda s: integral_I1(R, k0, s, True), lambda s: integral_I2(R, k0, 0.5 * R, s, True)):
        a, b = fn(base), fn(fine)
        assert abs(a.value - b.value) < a.error


def test_settings_validation():
    with pytest.raises(DomainError):
        integral_I1(20.0, 1.0, QuadratureSettings(k_max=50.0))
    with pytest.raises(DomainError):
        integral_I1(20.0, 1.0, QuadratureSettings(pole_excision_halfwidth=0.0))
    with pytest.raises(DomainError):
        integral_I1(20.0, 1.0, QuadratureSettings(target_rel_error=1e-8))
    s = QuadratureSettings(k_max=500.0, convergence_factor_eta=(0.04, 0.02))
    assert QuadratureSettings.from_dict(s.to_dict()) == s


def test_convergence_error_carries_estimate():
    # two half-periods of tail with a coarse cap cannot meet a tight target
    s = QuadratureSettings(period_partitions=2, k_max=101.0)
    with pytest.raises(ConvergenceError) as info:
        for R in (20.0, 20.3, 37.1):
            integral_I2(R, 1.0, 0.5 * R, s)
    assert math.isfinite(info.value.best_estimate)
    assert info.value.error_estimate > 0


def test_cone_guard():
    with pytest.raises(LightConeSingularity):
        integral_I2(20.0, 1.0, 20.0)
    with pytest.raises(LightConeSingularity):
        radial_integral(20.0, 1.0, 20.0 + 1e-7, FULL)


@pytest.mark.parametrize("mode", [FULL, RWA])
@pytest.mark.parametrize("parity", [SYM, ANTI])
@pytest.mark.parametrize("frac", [0.3, 0.7, 1.5, 3.0])
def test_closed_form_matches_quadrature(oblique_pair, mode, parity, frac):
    t = frac * oblique_pair.distance
    ref = delta_e(t, oblique_pair, parity, mode)
    quad = delta_e_quadrature(t, oblique_pair, parity, mode)
    scale = abs(delta_e_stationary(oblique_pair, parity))
    if mode is FULL and frac < 1:
        assert abs(quad) < 1e-3 * scale
    else:
        assert quad == pytest.approx(ref, rel=1e-4)


def test_eta_route_agrees_with_pv(perpendicular_pair):
    for t, mode in ((10.0, RWA), (30.0, FULL)):
        pv = delta_e_quadrature(t, perpendicular_pair, SYM, mode, return_error=True)
        eta = delta_e_quadrature(t, perpendicular_pair, SYM, mode, method="eta", return_error=True)
        assert abs(pv.value - eta.value) <= pv.error + eta.error
        assert eta.value == pytest.approx(pv.value, rel=1e-4)


def test_unknown_method(perpendicular_pair):
    with pytest.raises(DomainError):
        delta_e_quadrature(10.0, perpendicular_pair, SYM, RWA, method="trapezoid")


def test_rejects_bad_geometry():
    with pytest.raises(DomainError):
        integral_I1(-1.0, 1.0)
    with pytest.raises(DomainError):
        integral_I2(1.0, 1.0, -2.0)
    with pytest.raises(DomainError):
        AtomPairConfig((1, 0, 0), (0, 0, 0), (0, 0, 1), (0, 0, 1), -1.0)
