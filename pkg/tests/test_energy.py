import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import MODELS, model, smooth_even, smooth_random
from gnwaves.energy import (PenaltyConfig, energy, energy_gradient, energy_kdv, energy_parts,
                            kdv_limit_energy, mass, penalty)
from gnwaves.errors import ConfigurationError, PenaltyDomainError
from gnwaves.kdv import xi_kdv
from gnwaves.operators import PhysicalParams, a_op
from gnwaves.spectral import Grid, Profile, fourier_shift, inner


@pytest.mark.parametrize("params", MODELS)
def test_energy_equals_quadratic_form(params, rng, grid):
    p, F1, F2 = model(*params)
    z = smooth_even(grid, rng, 0.1)
    e = energy(z, p, F1, F2)
    assert abs(e - inner(z, a_op(z, z, p, F1, F2))) <= 1e-12 * abs(e)


@pytest.mark.parametrize("params", MODELS)
def test_gradient_matches_central_differences(params, rng):
    p, F1, F2 = model(*params)
    g = Grid(40.0, 64)
    z = smooth_even(g, rng, 0.1)
    grad = energy_gradient(z, p, F1, F2).values
    h = 1e-6
    fd = np.empty(g.N)
    for j in range(g.N):
        e = np.zeros(g.N)
        e[j] = h
        fd[j] = (energy(z + Profile(g, e), p, F1, F2) - energy(z - Profile(g, e), p, F1, F2)) / (2 * h * g.dx)
    assert np.max(np.abs(fd - grad)) <= 1e-6 * np.max(np.abs(grad))


@pytest.mark.parametrize("params", MODELS)
def test_pairing_is_gradient_against_profile(params, rng, grid):
    p, F1, F2 = model(*params)
    z = smooth_random(grid, rng, 0.1)
    parts = energy_parts(z, p, F1, F2)
    assert abs(parts.pairing - inner(energy_gradient(z, p, F1, F2), z)) <= 1e-12 * abs(parts.pairing)
    assert parts.total == pytest.approx(energy(z, p, F1, F2), rel=1e-15)
    assert parts.mass == pytest.approx(mass(z, p), rel=1e-15)


@settings(max_examples=20, deadline=None)
@given(x0=st.floats(-30, 30), seed=st.integers(0, 1000))
def test_energy_translation_invariant(x0, seed):
    p, F1, F2 = model(1.0, 0.5, "imp")
    g = Grid(60.0, 256)
    z = smooth_even(g, np.random.default_rng(seed), 0.1)
    e = energy(z, p, F1, F2)
    assert energy(fourier_shift(z, x0), p, F1, F2) == pytest.approx(e, rel=1e-11)


@pytest.mark.parametrize("params", MODELS)
def test_expansion_homogeneity(params, rng, grid):
    p, F1, F2 = model(*params)
    z = smooth_random(grid, rng, 0.1)
    base = energy_parts(z, p, F1, F2)
    half = energy_parts(0.5 * z, p, F1, F2)
    assert half.e2 == pytest.approx(base.e2 / 4, rel=1e-13)
    assert half.e3 == pytest.approx(base.e3 / 8, rel=1e-11)


@pytest.mark.parametrize("params", MODELS)
def test_expansion_remainders_are_quartic(params, rng, grid):
    p, F1, F2 = model(*params)
    z = smooth_even(grid, rng, 1.0)
    amps = np.array([0.02, 0.01, 0.005, 0.0025])
    rem, pair = [], []
    for a in amps:
        b = energy_parts(a * z, p, F1, F2)
        rem.append(abs(b.e_rem))
        pair.append(abs(b.pairing - 2 * b.e2 - 3 * b.e3))
    assert abs(np.polyfit(np.log(amps), np.log(rem), 1)[0] - 4) <= 0.2
    assert abs(np.polyfit(np.log(amps), np.log(pair), 1)[0] - 4) <= 0.2


@pytest.mark.parametrize("params", MODELS)
def test_long_wave_limit_is_kdv_energy(params):
    """For z_a(x) = a psi(sqrt(a) x) the neglected terms are O(a^(7/2))."""
    p, F1, F2 = model(*params)
    base = Grid(40.0, 512)
    psi = 1 / np.cosh(base.nodes) ** 2
    amps = np.logspace(-4, -2, 6)
    diffs = []
    for a in amps:
        g = Grid(base.P / np.sqrt(a), base.N)
        z = Profile(g, a * psi)
        diffs.append(abs(energy(z, p, F1, F2) - kdv_limit_energy(z, p)))
    slope = np.polyfit(np.log(amps), np.log(diffs), 1)[0]
    assert abs(slope - 3.5) <= 0.05


def test_energy_kdv_of_soliton():
    p = PhysicalParams(0.0, 1.0)
    g = Grid(80.0, 512)
    assert energy_kdv(xi_kdv(g, p), p) == pytest.approx(-0.45, abs=1e-4)


def test_energy_positive_and_mass_scaling(rng, grid):
    for params in MODELS:
        p, F1, F2 = model(*params)
        z = smooth_random(grid, rng, 0.1)
        assert energy(z, p, F1, F2) > 0
        assert mass(3 * z, p) == pytest.approx(9 * mass(z, p), rel=1e-14)
        assert mass(z, p) == pytest.approx(p.sum * inner(z, z), rel=1e-13)


def test_energy_of_zero_is_zero(grid):
    p, F1, F2 = model(0.3, 1.7, "imp")
    assert energy(Profile.zeros(grid), p, F1, F2) == 0.0


def test_penalty_values():
    cfg = PenaltyConfig(1.0)
    assert penalty(0.0, cfg) == (0.0, 0.0)
    assert penalty(1.0, cfg) == (0.0, 0.0)
    v, d = penalty(2.0, cfg)
    assert v == pytest.approx(math.exp(-1) / 2, rel=1e-15)
    h = 1e-6
    fd = (penalty(2.0 + h, cfg)[0] - penalty(2.0 - h, cfg)[0]) / (2 * h)
    assert d == pytest.approx(fd, rel=1e-8)
    # flat just above R^2, blowing up at (2R)^2
    assert penalty(1.0 + 1e-3, cfg)[0] < 1e-300
    assert penalty(4.0 - 1e-6, cfg)[0] > 1e5


def test_penalty_domain():
    cfg = PenaltyConfig(0.5)
    with pytest.raises(PenaltyDomainError):
        penalty(1.0, cfg)
    with pytest.raises(ConfigurationError):
        penalty(-1.0, cfg)
    with pytest.raises(ConfigurationError):
        PenaltyConfig(0.0)


@settings(max_examples=50, deadline=None)
@given(t=st.floats(0.0, 3.999), R=st.floats(0.1, 10.0))
def test_penalty_nonnegative_and_nondecreasing(t, R):
    cfg = PenaltyConfig(R)
    v, d = penalty(t * R * R, cfg)
    assert v >= 0 and d >= 0
