import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gnwaves.energy import energy_kdv, mass
from gnwaves.errors import ConfigurationError
from gnwaves.kdv import (alpha0, alpha0_closed, fit_rate, h1_distance_to_kdv, kdv_equation_residual,
                         kdv_reference, rescale_from_kdv, rescale_to_kdv, xi_kdv)
from gnwaves.operators import PhysicalParams
from gnwaves.spectral import Grid, fourier_shift, hs_norm


def _alpha0_oracle(gamma, delta):
    """Solve (g+d) ||A sech^2(kappa x)||^2 = 1 by quadrature and root finding."""
    mp.mp.dps = 30
    g, d = mp.mpf(gamma), mp.mpf(delta)
    s, n, D = g + d, d * d - g, g + 1 / d

    def constraint(a):
        A = a * s / n
        kap = mp.sqrt(3 * a * s / D) / 2
        return s * A**2 * mp.quad(lambda x: mp.sech(kap * x) ** 4, [-mp.inf, 0, mp.inf]) - 1

    return float(mp.findroot(constraint, mp.mpf("0.5")))


# frozen arbitrary-precision values
ORACLE = {(0.0, 1.0): 0.75, (1.0, 0.5): 0.180281196288426, (0.3, 1.7): 0.874114412021208}


@pytest.mark.parametrize("gd", list(ORACLE))
def test_alpha0_against_oracle(gd):
    assert _alpha0_oracle(*gd) == pytest.approx(ORACLE[gd], rel=1e-12)
    p = PhysicalParams(*gd)
    assert alpha0(p) == pytest.approx(ORACLE[gd], rel=1e-12)
    assert alpha0_closed(p) == pytest.approx(ORACLE[gd], rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(gamma=st.floats(0.0, 5.0), delta=st.floats(0.1, 5.0))
def test_alpha0_forms_agree(gamma, delta):
    if abs(delta**2 - gamma) <= 1e-3:
        return
    p = PhysicalParams(gamma, delta)
    assert abs(alpha0(p) - alpha0_closed(p)) <= 1e-12 * alpha0(p)


@pytest.mark.parametrize("gd", list(ORACLE))
def test_soliton_identities(gd):
    p = PhysicalParams(*gd)
    ref = kdv_reference(p)
    g = Grid(60.0 / ref.decay_kappa, 1024)
    xi = xi_kdv(g, p)
    assert xi.flags == ()
    assert kdv_equation_residual(xi, p).max_norm() < 1e-8
    assert mass(xi, p) == pytest.approx(1.0, abs=1e-6)
    assert energy_kdv(xi, p) == pytest.approx(-0.6 * ref.alpha0, abs=1e-4)
    assert ref.i_kdv == -0.6 * ref.alpha0


def test_soliton_sign_follows_nonlinearity():
    assert kdv_reference(PhysicalParams(0.0, 1.0)).amplitude > 0
    assert kdv_reference(PhysicalParams(1.0, 0.5)).amplitude < 0


def test_short_domain_is_flagged():
    p = PhysicalParams(0.0, 1.0)
    assert "insufficient-domain" in xi_kdv(Grid(10.0, 128), p).flags


@pytest.mark.parametrize("q", [1e-4, 0.01, 0.3])
def test_rescaling(q):
    p = PhysicalParams(1.0, 0.5)
    ref = kdv_reference(p)
    xi = xi_kdv(Grid(60.0 / ref.decay_kappa, 512), p)
    z = rescale_from_kdv(xi, q)
    assert mass(z, p) == pytest.approx(q, rel=1e-10)
    assert z.max_norm() == pytest.approx(q ** (2 / 3) * abs(ref.amplitude), rel=1e-12)
    back = rescale_to_kdv(z, q)
    assert back.grid.P == pytest.approx(xi.grid.P, rel=1e-14)
    np.testing.assert_allclose(back.values, xi.values, rtol=1e-14, atol=0)
    assert rescale_from_kdv(xi, q, N=1024).grid.N == 1024


def test_rescaling_rejects_nonpositive_q():
    xi = xi_kdv(Grid(60.0, 64), PhysicalParams(0.0, 1.0))
    with pytest.raises(ConfigurationError):
        rescale_from_kdv(xi, 0.0)


def test_distance_recovers_shift():
    p = PhysicalParams(0.0, 1.0)
    q = 0.01
    xi = xi_kdv(Grid(80.0, 512), p)
    z = fourier_shift(rescale_from_kdv(xi, q), 3.7)
    err, shift = h1_distance_to_kdv(z, q, p)
    assert err < 1e-7
    assert shift == pytest.approx(3.7, abs=1e-4)
    perturbed = z.with_values(z.values * 1.01)
    err, _ = h1_distance_to_kdv(perturbed, q, p)
    assert err == pytest.approx(0.01 * hs_norm(xi, 1), rel=1e-6)


def test_distance_of_zero_rejected():
    p = PhysicalParams(0.0, 1.0)
    with pytest.raises(ConfigurationError):
        h1_distance_to_kdv(xi_kdv(Grid(80.0, 64), p) * 0.0, 0.1, p)


def test_fit_exact_power_law():
    q = np.logspace(-4, -1, 6)
    fit = fit_rate(q, 2.5 * q**0.4)
    assert fit.exponent == pytest.approx(0.4, abs=1e-12)
    assert fit.prefactor == pytest.approx(2.5, rel=1e-12)
    assert fit.r2 == pytest.approx(1.0, abs=1e-12)


def test_fit_noisy_power_law():
    rng = np.random.default_rng(3)
    q = np.logspace(-4, -1, 8)
    fit = fit_rate(q, 0.7 * q ** (2 / 3) * (1 + 0.01 * rng.uniform(-1, 1, q.size)))
    assert abs(fit.exponent - 2 / 3) < 0.01
    assert fit.r2 > 0.999


def test_fit_constant_and_errors():
    fit = fit_rate([1e-3, 1e-2, 1e-1, 1.0], [2.0] * 4)
    assert fit.exponent == pytest.approx(0.0, abs=1e-13)
    assert fit.prefactor == pytest.approx(2.0)
    with pytest.raises(ConfigurationError):
        fit_rate([1, 2, 3], [1, 2, 3])
    with pytest.raises(ConfigurationError):
        fit_rate([1, 2, 3, 4], [1, 0, 3, 4])
