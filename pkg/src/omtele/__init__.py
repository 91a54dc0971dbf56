"""Simulation of continuous-variable teleportation through an optomagnonic
channel, with Fock-space and quadrature oracles for every closed form."""

from omtele.errors import (
    ConfigError,
    ConvergenceError,
    GuardError,
    GuardWarning,
    InstabilityError,
    OmteleError,
    QuadratureError,
    UnsupportedFormulaError,
    ZeroNormError,
)
from omtele.fock import DensityOperator, TruncatedState
from omtele.kernels import BACKEND
from omtele.params import DerivedParams, PhysicalParams, derive_params
from omtele.states import InputStateSpec

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConfigError",
    "ConvergenceError",
    "DensityOperator",
    "DerivedParams",
    "GuardError",
    "GuardWarning",
    "InputStateSpec",
    "InstabilityError",
    "OmteleError",
    "PhysicalParams",
    "QuadratureError",
    "TruncatedState",
    "UnsupportedFormulaError",
    "ZeroNormError",
    "derive_params",
]
