"""Macroscopic Bell and Leggett-Garg tests with entangled cat states."""

from catbell.errors import CatBellError, ConfigInvalid, DegenerateState, GridTooSmall, TruncationTooSmall
from catbell.fock import EvolutionParams, FockState, coherent, evolve_nonlinear
from catbell.inequalities import (
    BellSettings,
    InequalityReport,
    LGSettings,
    chsh_value,
    epr_epsilon,
    lg_bipartite_value,
    lg_single_system_value,
    p_variance,
)
from catbell.modes import BellSign, Ensemble, TwoModeState, bell_cat, pointer_mixture
from catbell.quadrature import GridSpec

__version__ = "0.1.0"

__all__ = [
    "BellSettings",
    "BellSign",
    "CatBellError",
    "ConfigInvalid",
    "DegenerateState",
    "Ensemble",
    "EvolutionParams",
    "FockState",
    "GridSpec",
    "GridTooSmall",
    "InequalityReport",
    "LGSettings",
    "TruncationTooSmall",
    "TwoModeState",
    "bell_cat",
    "chsh_value",
    "coherent",
    "epr_epsilon",
    "evolve_nonlinear",
    "lg_bipartite_value",
    "lg_single_system_value",
    "p_variance",
    "pointer_mixture",
]
