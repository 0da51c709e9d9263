"""Solitary waves by damped Newton iteration on the traveling-wave residual.

The unknowns are the real Fourier coefficients of an even profile, which
removes the translation zero mode of the linearisation.  The Jacobian is
assembled by central differences, one column per cosine mode, with all
perturbed profiles of a chunk evaluated in a single batched residual call.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.linalg.lapack import dgecon

from .energy import _gradient_values, mass
from .errors import (CavitationError, ConfigurationError, ConvergenceError,
                     SingularJacobianError)
from .kdv import alpha0, xi_kdv_values
from .multipliers import MultiplierSpec
from .operators import PhysicalParams, _tw_residual_values, dxf_symbol
from .spectral import Grid, Profile, from_coeffs, resample, to_coeffs

# P = PERIOD_FACTOR / kappa with kappa the KdV sech^2 rate at the target speed
PERIOD_FACTOR = 40.0
BOUNDARY_TOL = 1e-12
LOCALIZATION_TOL = 1e-3
CHUNK = 256


@dataclass(frozen=True)
class SolverOptions:
    """Newton controls.  ``tolerance=None`` means 1e-10 * max(1, max|zeta|)."""

    tolerance: float | None = None
    max_iterations: int = 25
    damping: float = 0.5
    max_halvings: int = 20
    jacobian_step: float = 1e-6
    min_rcond: float = 1e-14
    verbose: bool = False

    def __post_init__(self):
        if self.tolerance is not None and not self.tolerance > 0:
            raise ConfigurationError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ConfigurationError("max_iterations must be >= 1")
        if not 0 < self.damping < 1:
            raise ConfigurationError("damping must lie in (0, 1)")
        if not self.jacobian_step > 0:
            raise ConfigurationError("jacobian_step must be positive")

    def tol_for(self, zeta_max: float) -> float:
        return self.tolerance if self.tolerance is not None else 1e-10 * max(1.0, zeta_max)


@dataclass(frozen=True, eq=False)
class SolitaryWave:
    profile: Profile
    c: float
    alpha: float
    q: float
    residual_norm: float
    el_residual_norm: float
    iterations: int
    amplitude: float
    flags: tuple = field(default=())

    @property
    def grid(self) -> Grid:
        return self.profile.grid

    def summary(self) -> dict:
        return {"c": self.c, "alpha": self.alpha, "q": self.q, "amplitude": self.amplitude,
                "residual_norm": self.residual_norm, "el_residual_norm": self.el_residual_norm,
                "iterations": self.iterations, "N": self.grid.N, "P": self.grid.P,
                "flags": list(self.flags)}


def _check_speed(c):
    if not c > 1:
        raise ConfigurationError(f"solitary waves need a supercritical speed c > 1, got c={c}")


def _boundary_flags(values, grid, tol=BOUNDARY_TOL):
    centre = abs(values[grid.N // 2])
    return ("insufficient-domain",) if abs(values[0]) > tol * centre else ()


def gn_explicit_values(x, c):
    eps = c * c - 1.0
    return eps / np.cosh(0.5 * math.sqrt(3.0 * eps / (c * c)) * np.asarray(x)) ** 2


def gn_explicit(c: float, grid: Grid) -> Profile:
    """Closed-form solitary wave of the one-layer Green-Naghdi model (gamma=0, delta=1)."""
    _check_speed(c)
    v = gn_explicit_values(grid.nodes, c)
    return Profile(grid, v, _boundary_flags(v, grid))


def kdv_decay_rate(c: float, p: PhysicalParams) -> float:
    """sech^2 rate of the KdV approximation at speed c (profile decays like exp(-2 kappa |x|))."""
    return 0.5 * math.sqrt(3.0 * p.sum * (1.0 - c**-2) / p.dispersion)


def estimated_mass(c: float, p: PhysicalParams) -> float:
    """Invert alpha + 1 = alpha0 q^(2/3) with alpha = -1/c^2."""
    return ((1.0 - c**-2) / alpha0(p)) ** 1.5


def kdv_guess_values(x, c, p):
    q = estimated_mass(c, p)
    if q == 0:
        return np.zeros_like(np.asarray(x, dtype=float))
    return q ** (2.0 / 3.0) * xi_kdv_values(q ** (1.0 / 3.0) * np.asarray(x), p)


def kdv_guess(c: float, p: PhysicalParams, grid: Grid) -> Profile:
    """Long-wave guess S_KdV(xi_KdV) at the mass predicted from c."""
    if c == 1:
        return Profile.zeros(grid)
    _check_speed(c)
    v = kdv_guess_values(grid.nodes, c, p)
    amp = float(abs(v[grid.N // 2]))
    if amp >= p.max_excursion:
        raise ConfigurationError(
            f"c={c} is too far from 1 for the long-wave guess (amplitude {amp:.3g} reaches "
            f"the cavitation guard); start closer to c=1 and use continuation")
    return Profile(grid, v, _boundary_flags(v, grid))


def auto_period(c: float, p: PhysicalParams, N: int) -> float:
    """Period PERIOD_FACTOR/kappa, doubled until the guess decays to 1e-12 at the boundary."""
    _check_speed(c)
    P = PERIOD_FACTOR / kdv_decay_rate(c, p)
    for _ in range(20):
        g = Grid(P, N)
        v = kdv_guess_values(g.nodes, c, p)
        if abs(v[0]) <= BOUNDARY_TOL * abs(v[N // 2]):
            return P
        P *= 2.0
    return P


@lru_cache(maxsize=16)
def _cosine_basis(grid: Grid) -> np.ndarray:
    b = from_coeffs(np.eye(grid.N // 2 + 1), grid)
    b.setflags(write=False)
    return b


class _System:
    """Residual map on real coefficient vectors for fixed (c, p, F1, F2, grid)."""

    def __init__(self, grid, c, p, F1, F2):
        self.grid, self.c, self.p = grid, float(c), p
        self.s1, self.s2 = dxf_symbol(grid, F1), dxf_symbol(grid, F2)

    def values(self, b):
        return from_coeffs(b, self.grid)

    def residual_values(self, z):
        return _tw_residual_values(z, self.c, self.p, self.s1, self.s2)

    def equations(self, r):
        return to_coeffs(r, self.grid).real

    def jacobian(self, z, h):
        basis = _cosine_basis(self.grid)
        n = basis.shape[0]
        J = np.empty((n, n))
        for start in range(0, n, CHUNK):
            rows = basis[start:start + CHUNK] * h
            both = np.concatenate([z + rows, z - rows])
            g = self.equations(self.residual_values(both))
            m = rows.shape[0]
            J[:, start:start + m] = ((g[:m] - g[m:]) / (2.0 * h)).T
        return J


def _emit(opts, record):
    if opts.verbose:
        print(json.dumps(record), file=sys.stderr, flush=True)


def _finish(system, b, iterations, tol):
    p, c, grid = system.p, system.c, system.grid
    z = system.values(b)
    prof = Profile(grid, z)
    r = system.residual_values(z)
    el = 0.5 * _gradient_values(z, p, system.s1, system.s2) - p.sum * z / c**2
    centre = grid.N // 2
    # the converged profile is only accurate to ~tol, so the tail test allows that much
    flags = []
    if abs(z[0]) > BOUNDARY_TOL * abs(z[centre]) + 10.0 * tol:
        flags.append("insufficient-domain")
    if np.any(z) and abs(z[0]) > LOCALIZATION_TOL * abs(z[centre]):
        flags.append("not-localized")
    if np.any(z) and int(np.argmax(np.abs(z))) != centre:
        flags.append("not-centred")
    return SolitaryWave(profile=prof, c=c, alpha=-1.0 / c**2, q=mass(prof, p),
                        residual_norm=float(np.max(np.abs(r))),
                        el_residual_norm=float(np.max(np.abs(el))),
                        iterations=iterations, amplitude=float(z[centre]), flags=tuple(flags))


def newton_solve(guess: Profile, c: float, p: PhysicalParams, F1: MultiplierSpec,
                 F2: MultiplierSpec, opts: SolverOptions | None = None) -> SolitaryWave:
    """Damped Newton iteration from an even guess; raises on failure with the trace."""
    opts = opts or SolverOptions()
    _check_speed(c)
    grid = guess.grid
    system = _System(grid, c, p, F1, F2)
    b = guess.coeffs.real.copy()
    trace = []
    if not np.any(b):
        return _finish(system, b, 0, 0.0)
    z = system.values(b)
    r = system.residual_values(z)
    rn = float(np.max(np.abs(r)))
    for it in range(opts.max_iterations + 1):
        tol = opts.tol_for(float(np.max(np.abs(z))))
        rec = {"iteration": it, "residual": rn, "tolerance": tol}
        if rn < tol:
            trace.append(rec)
            _emit(opts, rec)
            return _finish(system, b, it, tol)
        if it == opts.max_iterations:
            trace.append(rec)
            _emit(opts, rec)
            raise ConvergenceError(f"no convergence in {opts.max_iterations} iterations "
                                   f"(residual {rn:.3e}, tolerance {tol:.1e})", trace)
        h = opts.jacobian_step * (1.0 + float(np.sqrt(np.sum(grid.multiplicity * b * b))))
        J = system.jacobian(z, h)
        lu = lu_factor(J, check_finite=True)
        rcond, _ = dgecon(lu[0], float(np.max(np.sum(np.abs(J), axis=0))), norm="1")
        rec["rcond"] = float(rcond)
        if not rcond > opts.min_rcond:
            trace.append(rec)
            _emit(opts, rec)
            raise SingularJacobianError(
                f"Newton matrix numerically singular (condition ~ {1 / max(rcond, 1e-300):.2e})",
                condition=1.0 / max(rcond, 1e-300), trace=trace)
        step = lu_solve(lu, -system.equations(r))
        lam = 1.0
        for _ in range(opts.max_halvings + 1):
            b_new = b + lam * step
            z_new = system.values(b_new)
            try:
                r_new = system.residual_values(z_new)
            except CavitationError:
                lam *= opts.damping
                continue
            rn_new = float(np.max(np.abs(r_new)))
            if rn_new < rn:
                break
            lam *= opts.damping
        else:
            rec["damping"] = lam
            trace.append(rec)
            _emit(opts, rec)
            raise ConvergenceError(f"damping exhausted at iteration {it} "
                                   f"(residual {rn:.3e})", trace)
        rec["damping"] = lam
        trace.append(rec)
        _emit(opts, rec)
        b, z, r, rn = b_new, z_new, r_new, rn_new
    raise AssertionError("unreachable")


def solve_wave(c: float, p: PhysicalParams, F1: MultiplierSpec, F2: MultiplierSpec,
               N: int = 512, P: float | None = None, opts: SolverOptions | None = None,
               guess: str = "auto") -> SolitaryWave:
    """Pick a grid and an initial guess for speed c and run Newton."""
    _check_speed(c)
    grid = Grid(auto_period(c, p, N) if P is None else P, N)
    is_gn = p.gamma == 0 and p.delta == 1 and F1.kind == F2.kind == "identity"
    if guess == "auto":
        guess = "gn" if is_gn else "kdv"
    if guess == "gn":
        if not is_gn:
            raise ConfigurationError("the closed-form guess exists only for gamma=0, delta=1, F=identity")
        g0 = gn_explicit(c, grid)
    elif guess == "kdv":
        g0 = kdv_guess(c, p, grid)
    else:
        raise ConfigurationError(f"unknown guess {guess!r}")
    return newton_solve(g0, c, p, F1, F2, opts)


def refine_difference(wave: SolitaryWave, p: PhysicalParams, F1: MultiplierSpec,
                      F2: MultiplierSpec, opts: SolverOptions | None = None) -> tuple[float, SolitaryWave]:
    """Re-solve on 2N nodes and return the max-norm change at the shared nodes."""
    fine = Grid(wave.grid.P, 2 * wave.grid.N)
    w2 = newton_solve(resample(wave.profile, fine), wave.c, p, F1, F2, opts)
    return float(np.max(np.abs(w2.profile.values[::2] - wave.profile.values))), w2


@dataclass
class Branch:
    waves: list
    stopped: bool = False
    stop_report: dict | None = None

    @property
    def last(self) -> SolitaryWave:
        return self.waves[-1]


_BRANCH_FAILURES = (ConvergenceError, CavitationError)
FOLD_STEP = 1e-5
FOLD_FAILURES = 3


def continue_in_speed(c_start: float, c_end: float, steps: int, p: PhysicalParams,
                      F1: MultiplierSpec, F2: MultiplierSpec, opts: SolverOptions | None = None,
                      grid: Grid | None = None, N: int = 512, first: SolitaryWave | None = None,
                      on_wave=None) -> Branch:
    """Natural-parameter continuation through ``steps`` equispaced target speeds.

    Each converged wave (plus a secant predictor) seeds the next speed.  A
    failed step is halved; three failures with a step below 1e-5 end the
    branch with a stop report instead of an exception, and every wave
    converged so far is kept.  Small-step failures are counted over the whole
    branch rather than reset by intermediate successes: waves exist
    arbitrarily close to a limiting speed, so a reset would let the step
    shrink forever.  ``on_wave`` is called on each accepted wave.
    """
    _check_speed(c_start)
    if steps < 2 or not c_end > c_start:
        raise ConfigurationError("continuation needs steps >= 2 and c_end > c_start")
    opts = opts or SolverOptions()
    targets = list(np.linspace(c_start, c_end, steps))
    if first is None:
        if grid is None:
            first = solve_wave(c_start, p, F1, F2, N=N, opts=opts)
        else:
            first = solve_wave(c_start, p, F1, F2, N=grid.N, P=grid.P, opts=opts)
    waves = [first]
    if on_wave:
        on_wave(first)
    branch = Branch(waves)
    i = 1
    dc = targets[1] - targets[0] if len(targets) > 1 else 0.0
    small_failures = 0
    while i < len(targets):
        prev = waves[-1]
        c_try = min(prev.c + dc, targets[i])
        if len(waves) >= 2:
            w0, w1 = waves[-2], waves[-1]
            slope = (w1.profile.values - w0.profile.values) / (w1.c - w0.c)
            guess = w1.profile.with_values(w1.profile.values + (c_try - w1.c) * slope)
        else:
            guess = prev.profile
        try:
            wave = newton_solve(guess, c_try, p, F1, F2, opts)
            if "not-localized" in wave.flags or "not-centred" in wave.flags:
                raise ConvergenceError(f"converged to a non-solitary profile at c={c_try}")
        except _BRANCH_FAILURES as exc:
            if c_try - prev.c < FOLD_STEP:
                small_failures += 1
                if small_failures >= FOLD_FAILURES:
                    branch.stopped = True
                    branch.stop_report = {
                        "reason": "fold",
                        "c_last": prev.c,
                        "c_attempted": c_try,
                        "amplitude_last": prev.amplitude,
                        "last_error": str(exc),
                        "condition": getattr(exc, "condition", None),
                    }
                    return branch
            dc = (c_try - prev.c) / 2.0
            continue
        waves.append(wave)
        if on_wave:
            on_wave(wave)
        if c_try >= targets[i]:
            i += 1
            if i < len(targets):
                dc = min(2.0 * (c_try - prev.c), targets[i] - c_try)
        else:
            dc = 2.0 * (c_try - prev.c)
    return branch
