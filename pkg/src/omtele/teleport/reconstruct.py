"""Density operators from characteristic functions, and cat-state fidelity.

rho = (1/pi) Int d^2alpha chi(alpha) D(-alpha), accumulated on a trapezoid
grid with exact Fock-basis displacement elements.
"""

from __future__ import annotations

import math

import numpy as np

from omtele import fock, kernels
from omtele.errors import QuadratureError
from omtele.fock import DEFAULT_CUTOFF, DensityOperator
from omtele.parallel import chunks, ordered_map
from omtele.params import DerivedParams
from omtele.states import InputStateSpec, input_state
from omtele.teleport.chi import CharacteristicFunction, chi_input, chi_teleported
from omtele.teleport.fidelity import (
    MAX_REFINEMENTS,
    QUAD_POINTS,
    DiscrepancyRecord,
    TeleportResult,
    fidelity_quadrature,
    half_widths,
)

RECONSTRUCT_POINTS = 161
TRACE_CORRECTION_LIMIT = 1e-2
_ROW_CHUNK = 8


def _trapezoid_weights(n: int, h: float) -> np.ndarray:
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    return w


def density_from_chi_oracle(
    chi: CharacteristicFunction,
    cutoff: int = DEFAULT_CUTOFF,
    points: int = RECONSTRUCT_POINTS,
    threads: int = 1,
) -> DensityOperator:
    """Inverse Weyl transform of ``chi`` into the truncated basis.

    The result is Hermitized and rescaled to unit trace.  A trace correction
    above 1e-2 means the grid or cutoff cannot hold the state and raises.
    """
    hx, hy = half_widths(chi)
    xs = np.linspace(-hx, hx, points)
    ys = np.linspace(-hy, hy, points)
    wx = _trapezoid_weights(points, xs[1] - xs[0])
    wy = _trapezoid_weights(points, ys[1] - ys[0])

    def partial(sl):
        alphas = xs[None, :] + 1j * ys[sl, None]
        weights = chi(alphas) * (wy[sl, None] * wx[None, :]) / math.pi
        return kernels.displacement_accumulate(-alphas, weights, cutoff)

    total = np.zeros((cutoff + 1, cutoff + 1), dtype=np.complex128)
    for part in ordered_map(partial, chunks(points, _ROW_CHUNK), threads):
        total += part
    total = 0.5 * (total + total.conj().T)
    trace = np.trace(total).real
    if not abs(trace - 1.0) <= TRACE_CORRECTION_LIMIT:
        raise QuadratureError(f"reconstructed trace {trace:.4f}; grid too coarse or cutoff too small")
    return DensityOperator(total / trace)


def fidelity_fock(spec: InputStateSpec, rho: DensityOperator) -> float:
    """<psi_in| rho |psi_in> in the truncated basis."""
    return fock.overlap_fidelity(input_state(spec, rho.cutoff), rho)


def fidelity_cat(
    spec: InputStateSpec,
    derived: DerivedParams,
    resource: str,
    cutoff: int = DEFAULT_CUTOFF,
    reconstruct: bool = True,
    use_reduced: bool = False,
    threads: int = 1,
    points: int = QUAD_POINTS,
    max_refinements: int = MAX_REFINEMENTS,
) -> TeleportResult:
    """Quadrature fidelity of a teleported cat, optionally with rho_tel.

    When the state is reconstructed, its Fock-basis overlap with the input is
    attached as a diagnostic against the quadrature value.
    """
    if spec.kind != "cat":
        raise ValueError("fidelity_cat needs a cat input")
    quad = fidelity_quadrature(spec, derived, resource, use_reduced, threads, points, max_refinements)
    if not reconstruct:
        return quad
    rho = density_from_chi_oracle(chi_teleported(spec, derived, resource, use_reduced), cutoff, threads=threads)
    overlap = fidelity_fock(spec, rho)
    record = DiscrepancyRecord(
        "cat_fock_overlap", "oracle", quad.fidelity, overlap,
        {"input": "cat", "resource": resource, "alpha0": spec.alpha0, "varphi": spec.varphi},
    )
    return TeleportResult(quad.fidelity, "quadrature", quad.error, rho, (record,))


def teleported_density(
    spec: InputStateSpec,
    derived: DerivedParams,
    resource: str,
    cutoff: int = DEFAULT_CUTOFF,
    use_reduced: bool = False,
    threads: int = 1,
) -> DensityOperator:
    return density_from_chi_oracle(chi_teleported(spec, derived, resource, use_reduced), cutoff, threads=threads)


def input_density(spec: InputStateSpec, cutoff: int = DEFAULT_CUTOFF, threads: int = 1) -> DensityOperator:
    """Input state rebuilt from its chi; used to test the reconstruction itself."""
    return density_from_chi_oracle(chi_input(spec), cutoff, threads=threads)
