import math

import pytest

from resonance_dynamics import AtomPairConfig, DickeParity, DomainError, SIEstimateInput, si_force_estimate
from resonance_dynamics import units
from resonance_dynamics.resonance import delta_e_stationary

BASE = dict(mu_SI=1e-29, k0_SI=1e7, R_SI=1e-6)


def test_conversions():
    assert float(units.dipole_si_to_gaussian(1.0)) == pytest.approx(2.99792458e11)
    assert float(units.length_si_to_gaussian(1.0)) == 100.0
    assert units.wavenumber_si_to_gaussian(1e7) == 1e5
    assert float(units.time_si_to_length(1.0)) == 2.99792458e10
    # 1 a.u. of polarizability: 1.6488e-41 C m^2/V <-> a0^3 = 1.4819e-25 cm^3
    assert units.polarizability_si_to_gaussian(1.64877727436e-41) == pytest.approx(1.48184711e-25, rel=1e-6)


def test_order_of_magnitude():
    F = si_force_estimate(SIEstimateInput(**BASE))
    assert 1e-22 <= abs(F) <= 1e-20


def test_bilinear_in_dipole():
    F1 = si_force_estimate(SIEstimateInput(**BASE))
    F2 = si_force_estimate(SIEstimateInput(**{**BASE, "mu_SI": 2e-29}))
    assert F2 == pytest.approx(4 * F1, rel=1e-12)


def test_parity_flips_force():
    F1 = si_force_estimate(SIEstimateInput(**BASE))
    F2 = si_force_estimate(SIEstimateInput(**BASE, parity=DickeParity.ANTISYMMETRIC))
    assert F2 == pytest.approx(-F1, rel=1e-12)


def test_static_limit():
    # k0 -> 0: E = s mu^2 / R^3 for perpendicular dipoles, so F = 3 s mu^2 / R^4
    inp = SIEstimateInput(mu_SI=1e-29, k0_SI=1e-3, R_SI=1e-9)
    mu = float(units.dipole_si_to_gaussian(1e-29))
    R = 1e-7
    expected = 3 * mu**2 / R**4 * units.DYNE_TO_NEWTON
    assert si_force_estimate(inp) == pytest.approx(expected, rel=1e-6)
    par = si_force_estimate(SIEstimateInput(mu_SI=1e-29, k0_SI=1e-3, R_SI=1e-9, orientation="parallel"))
    assert par == pytest.approx(-2 * expected, rel=1e-6)


def test_force_is_energy_gradient():
    inp = SIEstimateInput(**BASE)
    mu = float(units.dipole_si_to_gaussian(inp.mu_SI))
    k0 = units.wavenumber_si_to_gaussian(inp.k0_SI)
    R = 1e-4

    def energy(r):
        return delta_e_stationary(AtomPairConfig((r, 0, 0), (0, 0, 0), (0, 0, mu), (0, 0, mu), k0), DickeParity.SYMMETRIC)

    # analytic R-derivative of mu^2 [(cos x + x sin x) - x^2 cos x] / R^3 with x = k0 R
    x = k0 * R
    f = (math.cos(x) + x * math.sin(x)) - x * x * math.cos(x)
    df = (x * math.cos(x) - 2 * x * math.cos(x) + x * x * math.sin(x)) * k0
    dE = mu**2 * (df / R**3 - 3 * f / R**4)
    assert energy(R) == pytest.approx(mu**2 * f / R**3, rel=1e-12)
    assert si_force_estimate(inp) == pytest.approx(-dE * 1e-5, rel=1e-6)


@pytest.mark.parametrize("field", ["mu_SI", "k0_SI", "R_SI"])
def test_rejects_nonpositive(field):
    with pytest.raises(DomainError):
        SIEstimateInput(**{**BASE, field: 0.0})


def test_rejects_bad_orientation():
    with pytest.raises(DomainError):
        SIEstimateInput(**BASE, orientation="diagonal")
