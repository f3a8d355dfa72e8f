"""Special-function contracts with independent oracles."""

import math
from fractions import Fraction

import numpy as np
import pytest

from multiwell import specfun as sf
from multiwell.errors import DomainError, EvaluationOverflow


# -- independent oracles -----------------------------------------------------


def erfc_series(x):
    """Complementary error function by a plain Taylor series (|x| <= 3)."""
    acc = Fraction(0)
    xf = Fraction(x).limit_denominator(10 ** 12)
    term = xf
    acc += term
    for n in range(1, 60):
        term = xf ** (2 * n + 1) * Fraction((-1) ** n, math.factorial(n) * (2 * n + 1))
        acc += term
    erf = 2.0 / math.sqrt(math.pi) * float(acc)
    return 1.0 - erf


def hermite_integer(n, num, den):
    """Exact-integer Hermite recurrence at the rational point num/den."""
    u = Fraction(num, den)
    h_prev, h = Fraction(1), 2 * u
    for k in range(1, n):
        h, h_prev = 2 * u * h - 2 * k * h_prev, h
    return h


H10_AT_2P5 = float(hermite_integer(10, 5, 2))  # frozen integer-recurrence oracle


def d_minus_one(z):
    """D_{-1}(z) = exp(z^2/4) sqrt(pi/2) erfc(z/sqrt2)."""
    return math.exp(z * z / 4.0) * math.sqrt(math.pi / 2.0) * erfc_series(z / math.sqrt(2.0))


# -- gamma -------------------------------------------------------------------


def test_gamma_against_stdlib():
    for x in np.linspace(0.02, 19.9, 83):
        assert abs(sf.gamma(x) - math.gamma(x)) < 2e-13 * abs(math.gamma(x))


def test_gamma_special_values():
    assert sf.gamma(1.0) == pytest.approx(1.0, rel=1e-14)
    assert sf.gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert sf.gamma(5.0) == pytest.approx(24.0, rel=1e-13)


def test_gamma_pole():
    with pytest.raises(DomainError):
        sf.gamma(0.0)


# -- hermite -------------------------------------------------------------------


def test_hermite_h0():
    assert sf.hermite_phys(0, 123.0) == 1.0


def test_hermite_h3():
    assert sf.hermite_phys(3, 1.0) == pytest.approx(-4.0, abs=1e-12)


def test_hermite_h10_integer_oracle():
    assert sf.hermite_phys(10, 2.5) == pytest.approx(H10_AT_2P5, rel=1e-13)


def test_hermite_domain():
    with pytest.raises(DomainError):
        sf.hermite_phys(401, 0.0)


def test_hermite_overflow_signal():
    with pytest.raises(EvaluationOverflow):
        sf.hermite_phys(400, 1e6)


def test_ho_eigenstate_orthonormal():
    x = np.linspace(-12, 12, 4096)
    dx = x[1] - x[0]
    states = [sf.ho_eigenstate(n, x) for n in range(6)]
    for i in range(6):
        for j in range(6):
            val = np.sum(states[i] * states[j]) * dx
            assert abs(val - (1.0 if i == j else 0.0)) < 1e-10


def test_ho_eigenstate_derivative():
    x = np.linspace(-6, 6, 2001)
    psi, dpsi = sf.ho_eigenstate_pair(4, x)
    fd = np.gradient(psi, x)
    assert np.max(np.abs(dpsi - fd)[50:-50]) < 1e-4


# -- gauss-hermite rule -------------------------------------------------------


def test_gauss_hermite_moments():
    u, w = sf.gauss_hermite(24)
    # integral of exp(-u^2) u^(2k), k = 0..3
    exact = [math.sqrt(math.pi), math.sqrt(math.pi) / 2, 3 * math.sqrt(math.pi) / 4,
             15 * math.sqrt(math.pi) / 8]
    for k, ref in enumerate(exact):
        val = np.sum(w * np.exp(-u ** 2) * u ** (2 * k))
        assert abs(val - ref) < 1e-12


def test_gauss_hermite_matches_numpy():
    u, _ = sf.gauss_hermite(40)
    ref, _ = np.polynomial.hermite.hermgauss(40)
    np.testing.assert_allclose(np.sort(u), np.sort(ref), atol=1e-12)


def test_gauss_hermite_orthonormality_sum():
    u, w = sf.gauss_hermite(30)
    table = np.array([sf.ho_eigenstate(n, u) for n in range(12)])
    gram = (table * w) @ table.T
    assert np.max(np.abs(gram - np.eye(12))) < 1e-12


# -- parabolic cylinder -------------------------------------------------------


def test_cylinder_d0_exact():
    for z in (-3.0, -1.2, 0.0, 1.2, 4.0, 31.0):
        assert sf.cylinder_d(0.0, z) == pytest.approx(math.exp(-z * z / 4.0), rel=1e-9)


def test_cylinder_nu0_at_1p2():
    assert sf.cylinder_d(0.0, 1.2) == pytest.approx(0.6976763, rel=1e-6)


def test_cylinder_d_minus1_erfc_oracle():
    assert sf.cylinder_d(-1.0, 0.0) == pytest.approx(math.sqrt(math.pi / 2.0), rel=1e-9)
    for z in (-2.0, -0.5, 0.7, 2.0):
        assert sf.cylinder_d(-1.0, z) == pytest.approx(d_minus_one(z), rel=1e-9)


def rk4_weber(nu, z_start, z_end, n_steps, y0):
    """Independent fixed-step RK4 integration of Weber's equation."""
    h = (z_end - z_start) / n_steps
    y = np.array(y0, dtype=float)

    def rhs(z, y):
        return np.array([y[1], (z * z / 4.0 - nu - 0.5) * y[0]])

    z = z_start
    for _ in range(n_steps):
        k1 = rhs(z, y)
        k2 = rhs(z + h / 2, y + h / 2 * k1)
        k3 = rhs(z + h / 2, y + h / 2 * k2)
        k4 = rhs(z + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        z += h
    return y


def asymptotic_seed(nu, z0, terms=6):
    """Series values (D, D') at large z0 from explicit correction terms."""

    def series(order):
        s, term = 1.0, 1.0
        for k in range(terms):
            term *= -(order - 2 * k) * (order - 2 * k - 1) / ((k + 1) * 2.0 * z0 * z0)
            s += term
        return z0 ** order * math.exp(-z0 * z0 / 4.0) * s

    d0 = series(nu)
    dp0 = nu * series(nu - 1.0) - 0.5 * z0 * d0
    return d0, dp0


def test_cylinder_value_nu_minus3_z2():
    # oracle: independent fixed-step RK4 sweep from the series seed at z = 20
    frozen = 0.0196532503215
    d0, dp0 = asymptotic_seed(-3.0, 20.0)
    oracle = rk4_weber(-3.0, 20.0, 2.0, 140000, [d0, dp0])[0]
    assert oracle == pytest.approx(frozen, rel=5e-8)
    assert sf.cylinder_d(-3.0, 2.0) == pytest.approx(frozen, rel=1e-9)


def test_cylinder_methods_agree_at_switch():
    for nu in (-0.02, -1.0, -2.5, -3.02):
        assert sf.CylinderEvaluator(nu).self_check() < 1e-9


def test_cylinder_positivity():
    xi = np.linspace(-20.0, 20.0, 401)
    for nu in (-0.02, -1.0, -2.5, -3.02):
        vals = sf.cylinder_d(nu, np.sqrt(2.0) * xi)
        assert np.all(vals > 0.0)


def test_cylinder_ode_residual():
    # plug D into Weber's equation via 5-point finite differences
    h = 0.005
    for nu in (-0.02, -1.0, -2.5, -3.02):
        z = np.arange(-10.0, 10.0 + h / 2, h)
        ev = sf.CylinderEvaluator(nu)
        y = ev.evaluate(z)
        d2 = (-y[4:] + 16 * y[3:-1] - 30 * y[2:-2] + 16 * y[1:-3] - y[:-4]) / (12 * h * h)
        zc = z[2:-2]
        yc = y[2:-2]
        lhs = d2 + (nu + 0.5 - zc ** 2 / 4.0) * yc
        # scale keeps the two coefficient pieces separate so the point where
        # nu + 1/2 = z^2/4 does not collapse the denominator
        scale = np.abs(d2) + np.abs((nu + 0.5) * yc) + np.abs(zc ** 2 / 4.0 * yc) + 1e-300
        assert np.max(np.abs(lhs) / scale) < 1e-6


def test_cylinder_asymptotic_form():
    # at z = 30 the value matches the asymptotic form with its first
    # correction term to better than 1e-6 (the leading-order ratio alone
    # differs by the known nu(nu-1)/(2 z^2), a few 1e-3 at these orders)
    z = 30.0
    for nu in (-0.5, -2.5):
        val = sf.cylinder_d(nu, z)
        c1 = -nu * (nu - 1) / (2 * z * z)
        c2 = nu * (nu - 1) * (nu - 2) * (nu - 3) / (8 * z ** 4)
        corrected = z ** nu * math.exp(-z * z / 4.0) * (1.0 + c1 + c2)
        assert abs(val / corrected - 1.0) < 1e-6


def test_cylinder_domain_errors():
    with pytest.raises(DomainError):
        sf.CylinderEvaluator(0.5)
    with pytest.raises(EvaluationOverflow):
        sf.cylinder_d(-1.0, 61.0)
    with pytest.raises(EvaluationOverflow):
        sf.CylinderEvaluator(-18.0).evaluate(-58.0)


def test_cylinder_derivative_consistency():
    ev = sf.CylinderEvaluator(-2.5)
    z = np.linspace(-5.0, 5.0, 4001)
    d, dp = ev.evaluate(z, derivative=True)
    fd = np.gradient(d, z)
    assert np.max(np.abs(dp - fd)[5:-5] / np.max(np.abs(dp))) < 1e-4


# -- wronskian ---------------------------------------------------------------


def test_wronskian_pair_values():
    assert sf.wronskian_pair(-1.0) == pytest.approx(2.0 * math.sqrt(math.pi), rel=1e-12)
    assert sf.wronskian_pair(-0.5) == pytest.approx(2.0, rel=1e-12)


def test_wronskian_pair_domain():
    with pytest.raises(DomainError):
        sf.wronskian_pair(0.2)


def test_wronskian_constancy_and_value():
    xi = np.array([-5.0, -3.0, 0.0, 3.0, 5.0])
    for nu in (-0.5, -1.0, -2.5):
        w = sf.wronskian_numeric(nu, xi)
        assert np.ptp(w) < 1e-8
        assert np.max(np.abs(w - sf.wronskian_pair(nu))) < 1e-8
