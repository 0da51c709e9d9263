"""KdV long-wave limit: the sech^2 soliton, the KdV scaling and rate fits."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigurationError
from .operators import PhysicalParams
from .spectral import Grid, Profile, aligned_distance, from_coeffs, resample

BOUNDARY_TOL = 1e-12


def alpha0(p: PhysicalParams) -> float:
    """Limit of (alpha + 1) q^(-2/3), fixed by requiring (g+d) ||xi_KdV||^2 = 1.

    Written as (g+d) alpha0 = (3/4) ((d^2-g)^4 / ((g+d)^2 (g+1/d)))^(1/3).
    The frequently quoted variants with (g+d) instead of (g+d)^2 coincide
    with this only when g + d = 1.
    """
    s = p.sum
    return 0.75 * (p.nonlinearity**4 / (s**2 * p.dispersion)) ** (1.0 / 3.0) / s


def alpha0_closed(p: PhysicalParams) -> float:
    """Same constant as (3/4) ((d^2-g)^4 / ((g+d)^5 (g+1/d)))^(1/3)."""
    return 0.75 * (p.nonlinearity**4 / (p.sum**5 * p.dispersion)) ** (1.0 / 3.0)


@dataclass(frozen=True)
class KdVReference:
    alpha0: float
    amplitude: float
    decay_kappa: float
    i_kdv: float

    def to_dict(self) -> dict:
        return asdict(self)


def kdv_reference(p: PhysicalParams) -> KdVReference:
    a0 = alpha0(p)
    return KdVReference(
        alpha0=a0,
        amplitude=a0 * p.sum / p.nonlinearity,
        decay_kappa=0.5 * math.sqrt(3.0 * a0 * p.sum / p.dispersion),
        i_kdv=-0.6 * a0,
    )


def xi_kdv_values(x, p: PhysicalParams) -> np.ndarray:
    ref = kdv_reference(p)
    return ref.amplitude / np.cosh(ref.decay_kappa * np.asarray(x)) ** 2


def xi_kdv(grid: Grid, p: PhysicalParams) -> Profile:
    """Unit-mass KdV soliton centred at 0, flagged if the period truncates its tail."""
    v = xi_kdv_values(grid.nodes, p)
    flags = ()
    if abs(v[0]) > BOUNDARY_TOL * abs(v[grid.N // 2]):
        flags = ("insufficient-domain",)
    return Profile(grid, v, flags)


def kdv_equation_residual(xi: Profile, p: PhysicalParams) -> Profile:
    """alpha0 (g+d) xi + 3 (g-d^2) xi^2 / 2 - ((g+1/d)/3) xi''."""
    k = xi.grid.rwavenumbers
    xi2 = from_coeffs(xi.coeffs * (-(k**2)), xi.grid)
    r = alpha0(p) * p.sum * xi.values - 1.5 * p.nonlinearity * xi.values**2 - p.dispersion / 3.0 * xi2
    return xi.with_values(r)


def _check_q(q):
    if not q > 0:
        raise ConfigurationError(f"mass parameter q must be positive, got {q}")


def rescale_from_kdv(xi: Profile, q: float, N: int | None = None) -> Profile:
    """zeta(x) = q^(2/3) xi(q^(1/3) x), sampled on the period P q^(-1/3).

    Nodes map onto nodes, so the rescaling itself is exact; ``N`` optionally
    resamples the result afterwards.
    """
    _check_q(q)
    g = Grid(xi.grid.P * q ** (-1.0 / 3.0), xi.grid.N)
    out = Profile(g, q ** (2.0 / 3.0) * xi.values, xi.flags)
    return out if N is None or N == g.N else resample(out, Grid(g.P, N))


def rescale_to_kdv(zeta: Profile, q: float, N: int | None = None) -> Profile:
    """Inverse of :func:`rescale_from_kdv`."""
    _check_q(q)
    g = Grid(zeta.grid.P * q ** (1.0 / 3.0), zeta.grid.N)
    out = Profile(g, q ** (-2.0 / 3.0) * zeta.values, zeta.flags)
    return out if N is None or N == g.N else resample(out, Grid(g.P, N))


def h1_distance_to_kdv(zeta: Profile, q: float, p: PhysicalParams) -> tuple[float, float]:
    """min over x0 of ||q^(-2/3) zeta(q^(-1/3) .) - xi_KdV(. - x0)||_{H^1}.

    Returns the error and the optimal shift in the coordinates of ``zeta``:
    the rescaled soliton centred at that point is the closest translate.
    """
    if not np.any(zeta.values):
        raise ConfigurationError("distance to the KdV soliton is undefined for zeta = 0")
    u = rescale_to_kdv(zeta, q)
    err, x0 = aligned_distance(u, xi_kdv(u.grid, p), 1.0)
    return err, x0 * q ** (-1.0 / 3.0)


@dataclass(frozen=True)
class RateFit:
    exponent: float
    prefactor: float
    r2: float


def fit_rate(qs, errors) -> RateFit:
    """Least-squares power law errors ~ prefactor * qs**exponent in log-log form."""
    q = np.asarray(qs, dtype=float)
    e = np.asarray(errors, dtype=float)
    if q.shape != e.shape or q.size < 4:
        raise ConfigurationError("fit_rate needs at least 4 (q, error) pairs")
    if np.any(q <= 0) or np.any(e <= 0):
        raise ConfigurationError("fit_rate needs strictly positive data")
    lq, le = np.log(q), np.log(e)
    slope, intercept = np.polyfit(lq, le, 1)
    pred = slope * lq + intercept
    ss_tot = float(np.sum((le - le.mean()) ** 2))
    ss_res = float(np.sum((le - pred) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return RateFit(float(slope), float(np.exp(intercept)), r2)
