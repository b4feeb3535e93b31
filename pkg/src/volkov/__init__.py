"""Volkov states of a Dirac particle in a plane-wave field, with numerical
checks of their orthonormality and completeness machinery."""
from .lorentz import K_NULL, OnShellMomentum, from_lightcone, lightcone_components, minkowski_dot
from .clifford import GAMMA, IDENTITY, anticommutator, dirac_adjoint_conjugate, slash
from .spinors import free_spinor, projector, spinor_completeness
from .field import PhaseIntegralCache, PlaneWaveField
from .states import SpacetimePoint, VolkovState

__version__ = "0.1.0"

__all__ = [
    "K_NULL", "OnShellMomentum", "from_lightcone", "lightcone_components", "minkowski_dot",
    "GAMMA", "IDENTITY", "anticommutator", "dirac_adjoint_conjugate", "slash",
    "free_spinor", "projector", "spinor_completeness",
    "PhaseIntegralCache", "PlaneWaveField", "SpacetimePoint", "VolkovState",
]
