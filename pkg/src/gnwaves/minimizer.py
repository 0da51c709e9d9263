"""Penalised energy minimisation on the periodic mass sphere.

Projected gradient descent with Armijo backtracking: the L2 gradient of
E_P + rho(||zeta||^2_{H^nu}) is made tangent to the sphere
(gamma + delta) ||zeta||^2 = q, a step is taken, and the iterate is pulled
back onto the sphere by rescaling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .energy import PenaltyConfig, _energy_density, _gradient_values, energy_parts, mass, penalty
from .errors import CavitationError, ConfigurationError, ConvergenceError, PenaltyDomainError
from .multipliers import MultiplierSpec
from .operators import PhysicalParams, dxf_symbol
from .spectral import Grid, Profile, from_coeffs, hs_norm, trapezoid
from .kdv import xi_kdv_values


def project_sphere(zeta: Profile, q: float, p: PhysicalParams) -> Profile:
    """Rescale ``zeta`` onto (gamma + delta) ||zeta||^2 = q."""
    m = mass(zeta, p)
    if m == 0:
        raise ConfigurationError("cannot project the zero profile onto the mass sphere")
    return zeta.with_values(zeta.values * np.sqrt(q / m))


def lagrange_multiplier(zeta: Profile, p: PhysicalParams, F1: MultiplierSpec,
                        F2: MultiplierSpec) -> float:
    """alpha = -<dE(zeta), zeta> / (2 (gamma + delta) ||zeta||^2)."""
    m = mass(zeta, p)
    if m == 0:
        raise ConfigurationError("the multiplier is undefined for zeta = 0")
    return -energy_parts(zeta, p, F1, F2).pairing / (2.0 * m)


@dataclass(frozen=True)
class MinimizerOptions:
    tolerance: float = 1e-8
    max_iterations: int = 100_000
    armijo: float = 1e-4
    backtrack: float = 0.5
    max_backtracks: int = 60

    def __post_init__(self):
        if not self.tolerance > 0 or self.max_iterations < 1:
            raise ConfigurationError("minimizer needs tolerance > 0 and max_iterations >= 1")
        if not 0 < self.armijo < 1 or not 0 < self.backtrack < 1:
            raise ConfigurationError("Armijo constants must lie in (0, 1)")


@dataclass(frozen=True, eq=False)
class MinimizeResult:
    profile: Profile
    alpha: float
    value: float
    q: float
    penalty_active: bool
    el_residual: float
    iterations: int
    R: float
    nu: float
    trace: list = field(default_factory=list, repr=False)

    def summary(self) -> dict:
        return {"alpha": self.alpha, "value": self.value, "q": self.q,
                "penalty_active": self.penalty_active, "el_residual": self.el_residual,
                "iterations": self.iterations, "R": self.R, "nu": self.nu,
                "N": self.profile.grid.N, "P": self.profile.grid.P}


class _Objective:
    def __init__(self, grid, p, F1, F2, cfg, nu):
        self.grid, self.p, self.cfg = grid, p, cfg
        self.s1, self.s2 = dxf_symbol(grid, F1), dxf_symbol(grid, F2)
        self.lam = (1.0 + grid.rwavenumbers**2) ** nu
        self.nu = nu

    def hnu_sq(self, prof):
        return hs_norm(prof, self.nu) ** 2

    def value(self, prof):
        """(objective, penalty value, rho', ||zeta||^2_{H^nu})."""
        t = self.hnu_sq(prof)
        rho, drho = penalty(t, self.cfg)
        e = trapezoid(_energy_density(prof.values, self.p, self.s1, self.s2), self.grid)
        return e + rho, rho, drho, t

    def gradient(self, prof, drho):
        g = _gradient_values(prof.values, self.p, self.s1, self.s2)
        if drho:
            g = g + 2.0 * drho * from_coeffs(prof.coeffs * self.lam, self.grid)
        return g


def initial_profile(grid: Grid, q: float, p: PhysicalParams) -> Profile:
    """Single sech^2 bump of KdV shape at mass q; negative when delta^2 < gamma."""
    v = q ** (2.0 / 3.0) * xi_kdv_values(q ** (1.0 / 3.0) * grid.nodes, p)
    return project_sphere(Profile(grid, v), q, p)


def minimize(P: float, N: int, q: float, p: PhysicalParams, F1: MultiplierSpec,
             F2: MultiplierSpec, R: float | None = None, nu: float = 1.0,
             opts: MinimizerOptions | None = None, start: Profile | None = None) -> MinimizeResult:
    """Constrained stationary point of E_P + rho on the sphere of mass q.

    ``R`` defaults to 10 sqrt(q).  Raises ConvergenceError when the budget is
    spent and PenaltyDomainError if the first iterate is outside the ball.
    """
    opts = opts or MinimizerOptions()
    if not q > 0:
        raise ConfigurationError(f"mass q must be positive, got {q}")
    theta = min(F1.theta, F2.theta)
    if not (nu >= 1.0 - theta and nu > 0.5):
        raise ConfigurationError(f"nu={nu} must satisfy nu >= 1 - theta = {1 - theta} and nu > 1/2")
    R = float(10.0 * np.sqrt(q)) if R is None else float(R)
    cfg = PenaltyConfig(R)
    grid = Grid(P, N)
    obj = _Objective(grid, p, F1, F2, cfg, nu)
    z = project_sphere(start, q, p) if start is not None else initial_profile(grid, q, p)
    val, rho, drho, t = obj.value(z)
    trace = []
    for it in range(opts.max_iterations + 1):
        g = obj.gradient(z, drho)
        zz = trapezoid(z.values**2, grid)
        gz = trapezoid(g * z.values, grid)
        gt = g - (gz / zz) * z.values
        gnorm = float(np.max(np.abs(gt)))
        trace.append({"iteration": it, "objective": val, "grad_norm": gnorm, "penalty": rho})
        if gnorm < opts.tolerance * (1.0 + abs(val)):
            alpha = -gz / (2.0 * q)
            el = g + 2.0 * alpha * p.sum * z.values
            return MinimizeResult(profile=z, alpha=float(alpha), value=float(val), q=mass(z, p),
                                  penalty_active=bool(t > R * R), el_residual=float(np.max(np.abs(el))),
                                  iterations=it, R=R, nu=nu, trace=trace)
        if it == opts.max_iterations:
            break
        slope = trapezoid(g * gt, grid)
        step = 1.0 / (1.0 + float(np.sqrt(trapezoid(g * g, grid))))
        for _ in range(opts.max_backtracks):
            try:
                cand = project_sphere(z.with_values(z.values - step * gt), q, p)
                cval, crho, cdrho, ct = obj.value(cand)
            except (CavitationError, PenaltyDomainError):
                step *= opts.backtrack
                continue
            if cval <= val - opts.armijo * step * slope:
                break
            step *= opts.backtrack
        else:
            raise ConvergenceError(f"line search failed at iteration {it} "
                                   f"(tangent gradient {gnorm:.3e})", trace)
        trace[-1]["step"] = step
        z, val, rho, drho, t = cand, cval, crho, cdrho, ct
    raise ConvergenceError(f"minimizer budget of {opts.max_iterations} iterations exhausted "
                           f"(tangent gradient {gnorm:.3e})", trace)
