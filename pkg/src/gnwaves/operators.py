"""Nonlocal operators of the modified bilayer Green-Naghdi system.

Nodal products are formed in physical space and every derivative or
multiplier is applied on the coefficients, in the factor order of the model
definitions.  The ``_*_values`` kernels work on arrays whose last axis holds
the nodes, so a batch of profiles (e.g. Jacobian columns) is evaluated with a
single FFT call per stage.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CavitationError, ConfigurationError, DegenerateParametersError
from .multipliers import MultiplierSpec
from .spectral import Grid, Profile, trapezoid


@dataclass(frozen=True)
class PhysicalParams:
    """Density ratio ``gamma``, depth ratio ``delta`` and depth clearance ``h0``.

    ``h0`` defaults to 5% of the shallower rest depth min(1, 1/delta).
    """

    gamma: float
    delta: float
    h0: float | None = None

    def __post_init__(self):
        if not self.gamma >= 0:
            raise ConfigurationError(f"gamma must be >= 0, got {self.gamma}")
        if not self.delta > 0:
            raise ConfigurationError(f"delta must be > 0, got {self.delta}")
        if abs(self.delta**2 - self.gamma) <= 1e-8:
            raise DegenerateParametersError(
                "degenerate parameters: delta**2 == gamma (critical case, "
                "no solitary waves); require |delta**2 - gamma| > 1e-8")
        top = min(1.0, 1.0 / self.delta)
        h0 = 0.05 * top if self.h0 is None else float(self.h0)
        if not 0 < h0 < top:
            raise ConfigurationError(f"h0 must lie in (0, {top}), got {h0}")
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "delta", float(self.delta))
        object.__setattr__(self, "h0", h0)

    @property
    def sum(self) -> float:
        """gamma + delta, the coefficient of the mass functional."""
        return self.gamma + self.delta

    @property
    def nonlinearity(self) -> float:
        """delta**2 - gamma; its sign selects elevation or depression waves."""
        return self.delta**2 - self.gamma

    @property
    def dispersion(self) -> float:
        """gamma + 1/delta, the long-wave dispersion coefficient (times 3)."""
        return self.gamma + 1.0 / self.delta

    @property
    def max_excursion(self) -> float:
        """Largest |zeta| allowed by the clearance on both layers."""
        return min(1.0, 1.0 / self.delta) - self.h0


@lru_cache(maxsize=64)
def dxf_symbol(grid: Grid, spec: MultiplierSpec) -> np.ndarray:
    """i k F(k) on the stored modes; the Nyquist entry is zero."""
    k = grid.rwavenumbers
    sym = 1j * k * np.asarray(spec(k), dtype=float)
    sym[-1] = 0.0
    sym.setflags(write=False)
    return sym


def _dxf(v, sym):
    return np.fft.irfft(np.fft.rfft(v, axis=-1) * sym, n=v.shape[-1], axis=-1)


def layer_depths(zeta_values, p: PhysicalParams, check: bool = True):
    """Return (h1, h2) = (1 - zeta, 1/delta + zeta), guarding cavitation."""
    h1 = 1.0 - zeta_values
    h2 = 1.0 / p.delta + zeta_values
    if check:
        lo = min(float(np.min(h1)), float(np.min(h2)))
        if not lo >= p.h0:
            raise CavitationError(f"layer depth {lo:.3g} below clearance h0={p.h0:.3g}", lo)
    return h1, h2


def _layer_terms(ubar, h, sym):
    """Shared pieces of Q and R for one layer: (dF u, dF{h^3 dF u} / h)."""
    du = _dxf(ubar, sym)
    inner = _dxf(h**3 * du, sym) / h
    return du, inner


def _a_values(z, w, p, s1, s2):
    h1, h2 = layer_depths(z, p)
    u2 = w / h2
    _, in2 = _layer_terms(u2, h2, s2)
    out = u2 - in2 / 3.0
    if p.gamma:
        u1 = w / h1
        _, in1 = _layer_terms(u1, h1, s1)
        out = out + p.gamma * (u1 - in1 / 3.0)
    return out


def _r_values(z, w, p, s1, s2):
    h1, h2 = layer_depths(z, p)
    u2 = w / h2
    d2, in2 = _layer_terms(u2, h2, s2)
    out = u2 * in2 / 3.0 + 0.5 * (h2 * d2) ** 2
    if p.gamma:
        u1 = w / h1
        d1, in1 = _layer_terms(u1, h1, s1)
        out = out - p.gamma * (u1 * in1 / 3.0 + 0.5 * (h1 * d1) ** 2)
    return out


def _tw_residual_values(z, c, p, s1, s2):
    """c^2 A[z]z - (gamma+delta) z - c^2/2 (h1^2 - gamma h2^2)/(h1 h2)^2 z^2 + c^2 R[z,z]."""
    h1, h2 = layer_depths(z, p)
    c2 = c * c
    u2 = z / h2
    d2, in2 = _layer_terms(u2, h2, s2)
    a = u2 - in2 / 3.0
    r = u2 * in2 / 3.0 + 0.5 * (h2 * d2) ** 2
    if p.gamma:
        u1 = z / h1
        d1, in1 = _layer_terms(u1, h1, s1)
        a = a + p.gamma * (u1 - in1 / 3.0)
        r = r - p.gamma * (u1 * in1 / 3.0 + 0.5 * (h1 * d1) ** 2)
    quad = (h1**2 - p.gamma * h2**2) / (h1 * h2) ** 2 * z**2
    return c2 * a - p.sum * z - 0.5 * c2 * quad + c2 * r


def _symbols(grid, F1, F2):
    return dxf_symbol(grid, F1), dxf_symbol(grid, F2)


def apply_dxF(u: Profile, F: MultiplierSpec) -> Profile:
    return Profile(u.grid, _dxf(u.values, dxf_symbol(u.grid, F)))


def q_op(h, ubar: Profile, F: MultiplierSpec, h0: float = 0.0) -> Profile:
    """-(1/3) h^-1 dF{h^3 dF{ubar}} for a nodal depth ``h``."""
    h = np.asarray(h, dtype=float)
    if not np.min(h) > h0:
        raise CavitationError(f"depth {np.min(h):.3g} not above h0={h0}", float(np.min(h)))
    _, inner = _layer_terms(ubar.values, h, dxf_symbol(ubar.grid, F))
    return Profile(ubar.grid, -inner / 3.0)


def a_op(zeta: Profile, w: Profile, p: PhysicalParams, F1: MultiplierSpec,
         F2: MultiplierSpec) -> Profile:
    return Profile(zeta.grid, _a_values(zeta.values, w.values, p, *_symbols(zeta.grid, F1, F2)))


def r_op(zeta: Profile, w: Profile, p: PhysicalParams, F1: MultiplierSpec,
         F2: MultiplierSpec) -> Profile:
    return Profile(zeta.grid, _r_values(zeta.values, w.values, p, *_symbols(zeta.grid, F1, F2)))


def tw_residual(zeta: Profile, c: float, p: PhysicalParams, F1: MultiplierSpec,
                F2: MultiplierSpec) -> Profile:
    """Residual of the traveling-wave equation at speed ``c``; zero on solitary waves."""
    vals = _tw_residual_values(zeta.values, float(c), p, *_symbols(zeta.grid, F1, F2))
    return Profile(zeta.grid, vals)


def residual_norms(r: Profile) -> tuple[float, float]:
    """(max norm, L2 norm) of a residual field."""
    return r.max_norm(), float(np.sqrt(trapezoid(r.values**2, r.grid)))


def linear_symbol(grid: Grid, p: PhysicalParams, F1: MultiplierSpec, F2: MultiplierSpec):
    """Action of A[0] on each stored mode."""
    k = grid.rwavenumbers
    kf1 = k * np.asarray(F1(k))
    kf2 = k * np.asarray(F2(k))
    return p.sum + p.gamma / 3.0 * kf1**2 + kf2**2 / (3.0 * p.delta)
