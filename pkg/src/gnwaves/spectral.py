"""Periodic Fourier grid, transforms and Sobolev norms.

Coefficients follow the normalisation

    u_hat[m] = P**-0.5 * integral_{-P/2}^{P/2} u(x) exp(-2i pi m x / P) dx,

discretised by the trapezoid rule on the nodes x_j = -P/2 + j P / N, so that
``sum_m (1 + k_m**2)**s |u_hat[m]|**2`` is the H^s_P norm squared.  Only the
non-negative modes are stored (real-to-complex layout); the Nyquist mode is
real and counted once in every sum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from scipy.optimize import minimize_scalar

from .errors import ConfigurationError

TAIL_RESOLVED = 1e-24


@dataclass(frozen=True)
class Grid:
    """Equispaced periodic collocation grid on [-P/2, P/2)."""

    P: float
    N: int

    def __post_init__(self):
        if not np.isfinite(self.P) or self.P <= 0:
            raise ConfigurationError(f"period must be positive, got P={self.P}")
        if int(self.N) != self.N or self.N < 8 or self.N % 2:
            raise ConfigurationError(f"N must be an even integer >= 8, got N={self.N}")
        object.__setattr__(self, "P", float(self.P))
        object.__setattr__(self, "N", int(self.N))

    @property
    def dx(self) -> float:
        return self.P / self.N

    @cached_property
    def nodes(self) -> np.ndarray:
        x = -0.5 * self.P + np.arange(self.N) * self.dx
        x.setflags(write=False)
        return x

    @cached_property
    def modes(self) -> np.ndarray:
        """Signed mode numbers -N/2+1, ..., N/2."""
        m = np.arange(-self.N // 2 + 1, self.N // 2 + 1)
        m.setflags(write=False)
        return m

    @property
    def wavenumbers(self) -> np.ndarray:
        return 2 * np.pi * self.modes / self.P

    @cached_property
    def rwavenumbers(self) -> np.ndarray:
        """Wavenumbers of the stored (non-negative) modes 0, ..., N/2."""
        k = 2 * np.pi * np.arange(self.N // 2 + 1) / self.P
        k.setflags(write=False)
        return k

    @cached_property
    def multiplicity(self) -> np.ndarray:
        """How often each stored mode appears in a full sum over Z."""
        w = np.full(self.N // 2 + 1, 2.0)
        w[0] = w[-1] = 1.0
        w.setflags(write=False)
        return w

    @cached_property
    def _phase(self) -> np.ndarray:
        # nodes start at -P/2, hence the (-1)**m factor
        s = np.where(np.arange(self.N // 2 + 1) % 2 == 0, 1.0, -1.0)
        s.setflags(write=False)
        return s


def make_grid(P: float, N: int) -> Grid:
    return Grid(P, N)


def to_coeffs(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Nodal values (last axis) to normalised Fourier coefficients."""
    return np.fft.rfft(values, axis=-1) * (grid._phase * (np.sqrt(grid.P) / grid.N))


def from_coeffs(coeffs: np.ndarray, grid: Grid) -> np.ndarray:
    c = np.asarray(coeffs) * (grid._phase * (grid.N / np.sqrt(grid.P)))
    return np.fft.irfft(c, n=grid.N, axis=-1)


@dataclass(frozen=True, eq=False)
class Profile:
    """A real periodic profile sampled on a grid.

    ``flags`` carries warnings attached by the producing operation, e.g. an
    insufficient domain or a spectrum truncated by resampling.
    """

    grid: Grid
    values: np.ndarray
    flags: tuple = field(default=())

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.N,):
            raise ValueError(f"expected {self.grid.N} nodal values, got shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "flags", tuple(self.flags))

    @classmethod
    def from_function(cls, grid: Grid, func) -> "Profile":
        return cls(grid, func(grid.nodes))

    @classmethod
    def from_coeffs(cls, grid: Grid, coeffs) -> "Profile":
        return cls(grid, from_coeffs(coeffs, grid))

    @classmethod
    def zeros(cls, grid: Grid) -> "Profile":
        return cls(grid, np.zeros(grid.N))

    @cached_property
    def coeffs(self) -> np.ndarray:
        c = to_coeffs(self.values, self.grid)
        c.setflags(write=False)
        return c

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    def with_values(self, values, flags=()) -> "Profile":
        return Profile(self.grid, values, flags)

    def __add__(self, other):
        return self.with_values(self.values + _vals(other))

    def __sub__(self, other):
        return self.with_values(self.values - _vals(other))

    def __mul__(self, a):
        return self.with_values(self.values * a)

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_values(-self.values)

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def reflect(self) -> "Profile":
        """u(-x) sampled on the same nodes."""
        return self.with_values(reflect_values(self.values))


def _vals(u):
    return u.values if isinstance(u, Profile) else u


def reflect_values(v: np.ndarray) -> np.ndarray:
    # node j sits at -P/2 + j dx; its mirror is node (N - j) mod N
    return np.roll(v[..., ::-1], 1, axis=-1)


def trapezoid(f, grid: Grid) -> float:
    """Periodic trapezoid rule over one period."""
    return float(np.sum(f, axis=-1) * grid.dx)


def inner(u: Profile, v: Profile) -> float:
    return trapezoid(u.values * v.values, u.grid)


def hs_norm(u: Profile, s: float = 0.0) -> float:
    g = u.grid
    weight = g.multiplicity * (1.0 + g.rwavenumbers**2) ** s
    return float(np.sqrt(np.sum(weight * np.abs(u.coeffs) ** 2)))


def fourier_shift(u: Profile, x0: float) -> Profile:
    """Translate ``u`` to ``u(. - x0)`` by phase multiplication.

    The Nyquist mode cannot be translated on the grid; it is multiplied by
    cos(k_N x0), so only band-limited profiles shift isometrically.
    """
    g = u.grid
    c = u.coeffs * np.exp(-1j * g.rwavenumbers * x0)
    c[-1] = c[-1].real
    return Profile(g, from_coeffs(c, g), u.flags)


def resample(u: Profile, grid2: Grid) -> Profile:
    """Trigonometric interpolation of ``u`` onto a grid with the same period.

    Downsampling truncates the series; discarded content is reported with the
    flag ``"truncated-spectrum"``.
    """
    g = u.grid
    if not np.isclose(grid2.P, g.P, rtol=1e-14, atol=0.0):
        raise ConfigurationError(f"resample needs equal periods, got {g.P} and {grid2.P}")
    n1, n2 = g.N // 2, grid2.N // 2
    c = u.coeffs
    out = np.zeros(n2 + 1, dtype=complex)
    flags = list(u.flags)
    if n2 >= n1:
        out[: n1 + 1] = c
        if n2 > n1:
            # a real Nyquist cosine splits evenly between modes +n1 and -n1
            out[n1] = 0.5 * c[n1]
    else:
        out[:n2] = c[:n2]
        out[n2] = 2.0 * c[n2].real
        dropped = np.sum(g.multiplicity[n2 + 1:] * np.abs(c[n2 + 1:]) ** 2)
        dropped += 2.0 * abs(c[n2].imag) ** 2
        total = np.sum(g.multiplicity * np.abs(c) ** 2)
        if total > 0 and dropped > TAIL_RESOLVED * total:
            flags.append("truncated-spectrum")
    return Profile(grid2, from_coeffs(out, grid2), tuple(flags))


def tail_fraction(u: Profile) -> float:
    """Energy fraction carried by the last octave of stored modes."""
    g = u.grid
    e = g.multiplicity * np.abs(u.coeffs) ** 2
    total = e.sum()
    if total == 0:
        return 0.0
    return float(e[g.N // 4 + 1:].sum() / total)


def is_resolved(u: Profile, threshold: float = TAIL_RESOLVED) -> bool:
    return tail_fraction(u) < threshold


def spectral_derivative(u: Profile, order: int = 1) -> Profile:
    """Plain d^n/dx^n; odd orders drop the Nyquist mode."""
    g = u.grid
    sym = (1j * g.rwavenumbers) ** order
    if order % 2:
        sym[-1] = 0.0
    return Profile(g, from_coeffs(u.coeffs * sym, g))


def aligned_distance(u: Profile, v: Profile, s: float = 1.0) -> tuple[float, float]:
    """min over x0 of ||u(. + x0) - v||_{H^s}, returned with the minimising x0.

    u(. + x0) is closest to v, i.e. ``u`` is ``v`` translated by +x0.  The
    optimum is located by a correlation scan over node shifts (one inverse
    transform) followed by a bounded scalar refinement to 1e-9 P.
    """
    g = u.grid
    if v.grid != g:
        raise ConfigurationError("aligned_distance needs both profiles on the same grid")
    w = g.multiplicity * (1.0 + g.rwavenumbers**2) ** s
    a, b = u.coeffs, v.coeffs
    base = float(np.sum(w * (np.abs(a) ** 2 + np.abs(b) ** 2)))

    def err_sq(x0):
        cross = np.sum(w * np.real(a * np.exp(1j * g.rwavenumbers * x0) * np.conj(b)))
        return max(base - 2.0 * float(cross), 0.0)

    # irfft doubles interior modes itself, so halve their multiplicity; the
    # Nyquist term only enters the refinement
    half = np.where(np.arange(g.N // 2) > 0, 0.5, 1.0)
    corr = np.fft.irfft(w[:-1] * half * a[:-1] * np.conj(b[:-1]), n=g.N)
    j = int(np.argmax(corr))
    x0 = j * g.dx if j <= g.N // 2 else (j - g.N) * g.dx
    res = minimize_scalar(err_sq, bounds=(x0 - g.dx, x0 + g.dx), method="bounded",
                          options={"xatol": 1e-9 * g.P})
    return float(np.sqrt(err_sq(res.x))), float(res.x)
