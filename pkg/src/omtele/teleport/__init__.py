"""Characteristic-function teleportation: chi maps, fidelities, reconstruction."""

from omtele.teleport.chi import (
    CharacteristicFunction,
    chi_input,
    chi_shared,
    chi_shared_fock,
    chi_teleported,
    shared_chi,
)
from omtele.teleport.fidelity import (
    DiscrepancyRecord,
    TeleportResult,
    fidelity_analytic,
    fidelity_quadrature,
)
from omtele.teleport.reconstruct import density_from_chi_oracle, fidelity_cat, fidelity_fock

__all__ = [
    "CharacteristicFunction",
    "DiscrepancyRecord",
    "TeleportResult",
    "chi_input",
    "chi_shared",
    "chi_shared_fock",
    "chi_teleported",
    "density_from_chi_oracle",
    "fidelity_analytic",
    "fidelity_cat",
    "fidelity_fock",
    "fidelity_quadrature",
    "shared_chi",
]
