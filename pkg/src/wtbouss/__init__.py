"""Pseudospectral solver and verification suite for weakly transverse Boussinesq systems."""

__version__ = "0.1.0"

from .energy import EnergyReport, energy, sobolev_norm, tilde_energy
from .evolve import InitialData, RunConfig, integrate, long_time_sweep, make_initial, step
from .spectral import GridSpec, SymbolSpec, apply_symbol, dealiased_product
from .systems import ModelParams, State, consistency_residual, curl_residual, rhs, validate_params
from .unknowns import ResolventConfig, from_ptheta, gamma_apply, resolvent_apply, to_ptheta, to_tilde

__all__ = [
    "EnergyReport", "GridSpec", "InitialData", "ModelParams", "ResolventConfig", "RunConfig",
    "State", "SymbolSpec", "apply_symbol", "consistency_residual", "curl_residual",
    "dealiased_product", "energy", "from_ptheta", "gamma_apply", "integrate", "long_time_sweep",
    "make_initial", "resolvent_apply", "rhs", "sobolev_norm", "step", "tilde_energy",
    "to_ptheta", "to_tilde", "validate_params",
]
