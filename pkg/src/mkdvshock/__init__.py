"""Long-time asymptotics of focusing MKdV with step-like initial data.

Submodules
----------
specfun     elliptic integrals, Jacobi dn and the Riemann theta function
scattering  spectral data of the pure step
phase       genus-zero phase, delta function and sign tables
modulation  the elliptic modulation state d(xi), periods and Abelian integrals
wavefield   the asymptotic solution q(x, t) in all regions
oracle      direct pseudospectral solver and comparison metrics
cli         command-line front end
"""

from .errors import (
    ComparisonError,
    ConsistencyError,
    ContractError,
    ConvergenceError,
    DomainError,
    MKdVError,
    UnstableRunError,
)
from .scattering import ShockParams, Side
from .modulation import ModulationState, resolve_state
from .wavefield import q_asymptotic, q_mod_theta, q_mod_dn, classify

__version__ = "0.1.0"

__all__ = [
    "ComparisonError",
    "ConsistencyError",
    "ContractError",
    "ConvergenceError",
    "DomainError",
    "MKdVError",
    "UnstableRunError",
    "ShockParams",
    "Side",
    "ModulationState",
    "resolve_state",
    "q_asymptotic",
    "q_mod_theta",
    "q_mod_dn",
    "classify",
]
