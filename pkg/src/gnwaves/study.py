"""Family-level diagnostics: small-amplitude rate studies and profile widths."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .energy import energy
from .kdv import RateFit, alpha0, fit_rate, h1_distance_to_kdv
from .multipliers import MultiplierSpec
from .newton import SolitaryWave, SolverOptions, solve_wave
from .operators import PhysicalParams


@dataclass(frozen=True)
class RateRow:
    q: float
    c: float
    alpha: float
    E: float
    h1_error: float
    shift: float

    def energy_remainder(self, a0: float) -> float:
        """|E - q + (3/5) alpha0 q^(5/3)| / q^2."""
        return abs(self.E - self.q + 0.6 * a0 * self.q ** (5.0 / 3.0)) / self.q**2


@dataclass
class RateStudy:
    rows: list
    waves: list
    alpha0: float
    multiplier_fit: RateFit
    h1_fit: RateFit
    # least-squares prefactor of alpha + 1 with the exponent held at 2/3
    multiplier_prefactor_fixed: float

    @property
    def qs(self):
        return np.array([r.q for r in self.rows])

    def remainders(self):
        return np.array([r.energy_remainder(self.alpha0) for r in self.rows])

    def summary(self) -> dict:
        return {
            "alpha0": self.alpha0,
            "alpha_plus_one": {**self.multiplier_fit.__dict__,
                               "prefactor_fixed_exponent": self.multiplier_prefactor_fixed},
            "h1_error": dict(self.h1_fit.__dict__),
            "energy_remainder_over_q2": [float(v) for v in self.remainders()],
            "count": len(self.rows),
        }


def rate_study(speeds, p: PhysicalParams, F1: MultiplierSpec, F2: MultiplierSpec,
               N: int = 512, opts: SolverOptions | None = None, on_wave=None) -> RateStudy:
    """Solve each speed on its own automatic grid and fit the small-q rates.

    q is measured a posteriori as the mass of each computed wave.
    """
    rows, waves = [], []
    for c in sorted(float(v) for v in speeds):
        w: SolitaryWave = solve_wave(c, p, F1, F2, N=N, opts=opts)
        err, shift = h1_distance_to_kdv(w.profile, w.q, p)
        rows.append(RateRow(q=w.q, c=c, alpha=w.alpha, E=energy(w.profile, p, F1, F2),
                            h1_error=err, shift=shift))
        waves.append(w)
        if on_wave:
            on_wave(w)
    q = np.array([r.q for r in rows])
    a1 = np.array([1.0 + r.alpha for r in rows])
    fixed = float(np.exp(np.mean(np.log(a1) - (2.0 / 3.0) * np.log(q))))
    return RateStudy(rows=rows, waves=waves, alpha0=alpha0(p), multiplier_fit=fit_rate(q, a1),
                     h1_fit=fit_rate(q, [r.h1_error for r in rows]),
                     multiplier_prefactor_fixed=fixed)


def half_height_width(wave: SolitaryWave) -> float:
    """Length of the set where |zeta| >= |amplitude| / 2, with linear interpolation at its edges."""
    z = np.abs(wave.profile.values)
    x = wave.grid.nodes
    half = 0.5 * z.max()
    j = int(np.argmax(z))
    left = j
    while left > 0 and z[left - 1] >= half:
        left -= 1
    right = j
    while right < len(z) - 1 and z[right + 1] >= half:
        right += 1

    def edge(i_in, i_out):
        t = (z[i_in] - half) / (z[i_in] - z[i_out])
        return x[i_in] + t * (x[i_out] - x[i_in])

    xl = edge(left, left - 1) if left > 0 else x[0]
    xr = edge(right, right + 1) if right < len(z) - 1 else x[-1]
    return float(xr - xl)
