import mpmath as mp
import numpy as np
import pytest

from resonance_dynamics import AtomPairConfig

ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)


# -- arbitrary-precision sine/cosine integral oracle ---------------------------

_SERIES_LIMIT = 60


def _mp_series(x):
    """Si(x) and Ci(x) from the Maclaurin series, with enough digits to absorb cancellation."""
    with mp.workdps(int(x / 2.3) + 40):
        x = mp.mpf(x)
        x2 = x * x
        si, term, n = mp.mpf(0), x, 0
        while True:
            c = term / (2 * n + 1)
            si += c if n % 2 == 0 else -c
            term *= x2 / ((2 * n + 2) * (2 * n + 3))
            n += 1
            if abs(term) < mp.mpf(10) ** (-mp.mp.dps):
                break
        ci, term, n = mp.euler + mp.log(x), x2 / 2, 1
        while True:
            c = term / (2 * n)
            ci += -c if n % 2 == 1 else c
            term *= x2 / ((2 * n + 1) * (2 * n + 2))
            n += 1
            if abs(term) < mp.mpf(10) ** (-mp.mp.dps):
                break
        return si, ci


def _mp_asymptotic(x):
    """Si(x) and Ci(x) from the auxiliary-function expansions, optimally truncated."""
    with mp.workdps(40):
        x = mp.mpf(x)
        f = g = mp.mpf(0)
        ft, gt, n = 1 / x, 1 / x**2, 0
        while True:
            sign = 1 if n % 2 == 0 else -1
            f += sign * ft
            g += sign * gt
            fn = ft * (2 * n + 1) * (2 * n + 2) / x**2
            gn = gt * (2 * n + 2) * (2 * n + 3) / x**2
            n += 1
            if fn >= ft or gn >= gt or fn < mp.mpf(10) ** -35:
                break
            ft, gt = fn, gn
        return mp.pi / 2 - f * mp.cos(x) - g * mp.sin(x), f * mp.sin(x) - g * mp.cos(x)


def mp_si_ci(x):
    """Reference (Si, Ci) as mpf for x > 0."""
    return _mp_series(x) if x <= _SERIES_LIMIT else _mp_asymptotic(x)


@pytest.fixture
def mp_oracle():
    return mp_si_ci


# -- finite-difference oracle for the dipole operator -------------------------


def fd_dipole_operator(k, Rvec, h=1e-4, dps=40):
    """(-delta nabla^2 + nabla nabla) exp(ik|r|)/|r| at Rvec by central differences, in mpmath."""
    with mp.workdps(dps):
        k = mp.mpf(k)
        h = mp.mpf(h)
        r0 = [mp.mpf(float(c)) for c in Rvec]

        def f(dr):
            r = [r0[i] + dr[i] for i in range(3)]
            rn = mp.sqrt(sum(c * c for c in r))
            return mp.expj(k * rn) / rn

        zero = [0, 0, 0]
        f0 = f(zero)
        hess = [[None] * 3 for _ in range(3)]
        for i in range(3):
            e = list(zero)
            e[i] = h
            em = list(zero)
            em[i] = -h
            hess[i][i] = (f(e) - 2 * f0 + f(em)) / h**2
            for j in range(i + 1, 3):
                pp, pm, mp_, mm = (list(zero) for _ in range(4))
                pp[i], pp[j] = h, h
                pm[i], pm[j] = h, -h
                mp_[i], mp_[j] = -h, h
                mm[i], mm[j] = -h, -h
                hess[i][j] = hess[j][i] = (f(pp) - f(pm) - f(mp_) + f(mm)) / (4 * h**2)
        lap = hess[0][0] + hess[1][1] + hess[2][2]
        out = np.empty((3, 3), dtype=complex)
        for i in range(3):
            for j in range(3):
                v = hess[i][j] - (lap if i == j else 0)
                out[i, j] = complex(v)
        return out


# -- configurations -----------------------------------------------------------


@pytest.fixture
def perpendicular_pair():
    """R = 20 along x, both dipoles along z, k0 = 1 (the figure parameters)."""
    return AtomPairConfig((20.0, 0.0, 0.0), (0.0, 0.0, 0.0), (0.0, 0.0, 1.0), (0.0, 0.0, 1.0), 1.0)


@pytest.fixture
def oblique_pair():
    return AtomPairConfig((3.0, -4.0, 12.0), (-3.0, 4.0, 3.0), (0.3, -1.0, 0.2), (1.0, 0.4, -0.7), 1.0)


def canonical_field_pair(half=10.0, mu=1.0, k0=1.0):
    """Atoms at (0, 0, +/-half) with dipoles along y."""
    return AtomPairConfig((0.0, 0.0, half), (0.0, 0.0, -half), (0.0, mu, 0.0), (0.0, mu, 0.0), k0)
