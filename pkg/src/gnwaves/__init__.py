"""Solitary waves of modified (full-dispersion) bilayer Green-Naghdi systems."""

from .energy import EnergyBreakdown, PenaltyConfig, energy, energy_gradient, energy_kdv, energy_parts, mass, penalty
from .errors import (CavitationError, ConfigurationError, ConvergenceError, DegenerateParametersError,
                     GNWavesError, NumericalFailure, PenaltyDomainError, SingularJacobianError)
from .kdv import KdVReference, alpha0, fit_rate, h1_distance_to_kdv, kdv_reference, rescale_from_kdv, rescale_to_kdv, xi_kdv
from .minimizer import MinimizeResult, lagrange_multiplier, minimize, project_sphere
from .multipliers import MultiplierSpec, check_admissible, eval_identity, eval_improved
from .newton import SolitaryWave, SolverOptions, continue_in_speed, gn_explicit, kdv_guess, newton_solve, solve_wave
from .operators import PhysicalParams, a_op, apply_dxF, q_op, r_op, tw_residual
from .spectral import Grid, Profile, fourier_shift, hs_norm, make_grid, resample

__all__ = [name for name in dir() if not name.startswith("_")]
