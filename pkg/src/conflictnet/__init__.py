"""Signed-network dynamics of cooperation and conflict."""

from .core import (
    ModelParams,
    PerturbationImpulse,
    SignedNetwork,
    SimConfig,
    Trajectory,
    frobenius_norm,
    tie_std,
)
from .dynamics import Classification, EquilibriumReport, find_equilibrium, integrate
from .errors import ConflictNetError

__version__ = "0.1.0"

__all__ = [
    "Classification",
    "ConflictNetError",
    "EquilibriumReport",
    "ModelParams",
    "PerturbationImpulse",
    "SignedNetwork",
    "SimConfig",
    "Trajectory",
    "find_equilibrium",
    "frobenius_norm",
    "integrate",
    "tie_std",
]
