"""Energy functional, its gradient and its small-amplitude decompositions.

Every integral is the periodic trapezoid rule over one period, which is
spectrally accurate for smooth periodic integrands.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigurationError, PenaltyDomainError
from .multipliers import MultiplierSpec
from .operators import PhysicalParams, _dxf, dxf_symbol, layer_depths
from .spectral import Profile, hs_norm, spectral_derivative, trapezoid


@dataclass(frozen=True)
class EnergyBreakdown:
    """E together with its quadratic/cubic split and the pairing <dE(z), z>.

    ``e_rem`` is defined as ``total - e2 - e3``; every other field comes from
    its own quadrature.
    """

    total: float
    e2: float
    e3: float
    e_rem: float
    mass: float
    pairing: float

    def to_dict(self) -> dict:
        return asdict(self)


def mass(zeta: Profile, p: PhysicalParams) -> float:
    """(gamma + delta) ||zeta||^2 on the period."""
    return p.sum * hs_norm(zeta, 0.0) ** 2


def _energy_density(z, p, s1, s2):
    h1, h2 = layer_depths(z, p)
    dens = (h1 + p.gamma * h2) / (h1 * h2) * z**2
    dens = dens + h2**3 * _dxf(z / h2, s2) ** 2 / 3.0
    if p.gamma:
        dens = dens + p.gamma / 3.0 * h1**3 * _dxf(z / h1, s1) ** 2
    return dens


def energy(zeta: Profile, p: PhysicalParams, F1: MultiplierSpec, F2: MultiplierSpec) -> float:
    g = zeta.grid
    return trapezoid(_energy_density(zeta.values, p, dxf_symbol(g, F1), dxf_symbol(g, F2)), g)


def _gradient_values(z, p, s1, s2):
    h1, h2 = layer_depths(z, p)
    out = 2.0 * (h1 + p.gamma * h2) / (h1 * h2) * z
    out = out - (h1**2 - p.gamma * h2**2) / (h1**2 * h2**2) * z**2
    d2 = _dxf(z / h2, s2)
    out = out - (2.0 / (3.0 * p.delta)) / h2**2 * _dxf(h2**3 * d2, s2) + (h2 * d2) ** 2
    if p.gamma:
        d1 = _dxf(z / h1, s1)
        out = out - (2.0 * p.gamma / 3.0) / h1**2 * _dxf(h1**3 * d1, s1)
        out = out - p.gamma * (h1 * d1) ** 2
    return out


def energy_gradient(zeta: Profile, p: PhysicalParams, F1: MultiplierSpec,
                    F2: MultiplierSpec) -> Profile:
    """L2 gradient dE(zeta) as a nodal field."""
    g = zeta.grid
    return Profile(g, _gradient_values(zeta.values, p, dxf_symbol(g, F1), dxf_symbol(g, F2)))


def _e2(z, p, s1, s2):
    dens = p.sum * z**2 + _dxf(z, s2) ** 2 / (3.0 * p.delta)
    if p.gamma:
        dens = dens + p.gamma / 3.0 * _dxf(z, s1) ** 2
    return dens


def _e3(z, p, s1, s2):
    d2, d2sq = _dxf(z, s2), _dxf(z**2, s2)
    dens = (p.gamma - p.delta**2) * z**3 + z * d2**2 - (2.0 / 3.0) * d2 * d2sq
    if p.gamma:
        d1, d1sq = _dxf(z, s1), _dxf(z**2, s1)
        dens = dens - p.gamma * z * d1**2 + (2.0 * p.gamma / 3.0) * d1 * d1sq
    return dens


def _pairing(z, p, s1, s2):
    h1, h2 = layer_depths(z, p)
    dens = 2.0 * (h1 + p.gamma * h2) / (h1 * h2) * z**2
    dens = dens - (h1**2 - p.gamma * h2**2) / (h1**2 * h2**2) * z**3
    d2 = _dxf(z / h2, s2)
    dens = dens + (2.0 / (3.0 * p.delta)) * h2**3 * d2 * _dxf(z / h2**2, s2)
    dens = dens + z * (h2 * d2) ** 2
    if p.gamma:
        d1 = _dxf(z / h1, s1)
        dens = dens + (2.0 * p.gamma / 3.0) * h1**3 * d1 * _dxf(z / h1**2, s1)
        dens = dens - p.gamma * z * (h1 * d1) ** 2
    return dens


def energy_parts(zeta: Profile, p: PhysicalParams, F1: MultiplierSpec,
                 F2: MultiplierSpec) -> EnergyBreakdown:
    g = zeta.grid
    s1, s2 = dxf_symbol(g, F1), dxf_symbol(g, F2)
    z = zeta.values
    total = trapezoid(_energy_density(z, p, s1, s2), g)
    e2 = trapezoid(_e2(z, p, s1, s2), g)
    e3 = trapezoid(_e3(z, p, s1, s2), g)
    return EnergyBreakdown(total=total, e2=e2, e3=e3, e_rem=total - e2 - e3,
                           mass=mass(zeta, p), pairing=trapezoid(_pairing(z, p, s1, s2), g))


def kdv_limit_energy(zeta: Profile, p: PhysicalParams) -> float:
    """Long-wave truncation int (g+d) z^2 + (g-d^2) z^3 + ((g+1/d)/3) z'^2."""
    dz = spectral_derivative(zeta, 1).values
    z = zeta.values
    return trapezoid(p.sum * z**2 - p.nonlinearity * z**3 + p.dispersion / 3.0 * dz**2, zeta.grid)


def energy_kdv(xi: Profile, p: PhysicalParams) -> float:
    """int (gamma - delta^2) xi^3 + ((gamma + 1/delta)/3) xi'^2."""
    dxi = spectral_derivative(xi, 1).values
    return trapezoid(-p.nonlinearity * xi.values**3 + p.dispersion / 3.0 * dxi**2, xi.grid)


@dataclass(frozen=True)
class PenaltyConfig:
    """Barrier rho on the squared H^nu norm: zero below R^2, infinite at (2R)^2."""

    R: float

    def __post_init__(self):
        if not self.R > 0:
            raise ConfigurationError(f"penalty radius must be positive, got {self.R}")


def penalty(t: float, cfg: PenaltyConfig) -> tuple[float, float]:
    """Return (rho(t), rho'(t)) with rho(t) = exp(1/(R^2 - t)) / ((2R)^2 - t)."""
    r2, top = cfg.R**2, 4.0 * cfg.R**2
    if t < 0:
        raise ConfigurationError(f"penalty argument must be >= 0, got {t}")
    if t >= top:
        raise PenaltyDomainError(f"squared norm {t:.6g} left the ball of radius 2R={2 * cfg.R:.6g}")
    if t <= r2:
        return 0.0, 0.0
    a, b = top - t, r2 - t
    e = math.exp(1.0 / b)
    return e / a, e * (1.0 / a**2 + 1.0 / (a * b * b))
