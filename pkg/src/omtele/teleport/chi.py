"""Symmetric-ordered characteristic functions chi(alpha) = Tr[rho D(alpha)].

Teleportation multiplies the input chi by the shared-state chi evaluated on
the slice (alpha^*, gamma alpha): chi_tel(alpha) = chi_in(alpha) chi_sh(alpha).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from omtele import kernels
from omtele.entanglement import resource_state
from omtele.fock import DEFAULT_CUTOFF
from omtele.params import DerivedParams
from omtele.states import InputStateSpec, cat_norm_squared

RESOURCES = ("tmsv", "nongaussian")


@dataclass(frozen=True)
class CharacteristicFunction:
    """Vectorized map alpha -> chi(alpha).

    ``axis_scales`` are Gaussian widths along Re(alpha) and Im(alpha):
    |chi| falls off at least like exp(-x^2/(2 s_x^2) - y^2/(2 s_y^2)) up to
    polynomial factors and displaced lobes, and they size quadrature grids.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    decay_scale: float
    axis_scales: tuple[float, float] | None = None
    label: str = ""

    def __post_init__(self):
        if self.axis_scales is None:
            object.__setattr__(self, "axis_scales", (self.decay_scale, self.decay_scale))

    def __call__(self, alpha):
        return self.evaluator(np.asarray(alpha, dtype=np.complex128))

    def times(self, other: "CharacteristicFunction", label: str = "") -> "CharacteristicFunction":
        # The product decays at least as fast as either factor.
        sx = min(self.axis_scales[0], other.axis_scales[0])
        sy = min(self.axis_scales[1], other.axis_scales[1])
        return CharacteristicFunction(
            lambda a: self.evaluator(a) * other.evaluator(a),
            min(self.decay_scale, other.decay_scale),
            (sx, sy),
            label or f"{self.label}*{other.label}",
        )


def coherent_element(b1: complex, b2: complex, alpha: np.ndarray) -> np.ndarray:
    """<b1|D(alpha)|b2> for coherent states."""
    shifted = alpha + b2
    return np.exp(
        -0.5 * abs(b1) ** 2 - 0.5 * np.abs(shifted) ** 2 + np.conj(b1) * shifted
        + 0.5 * (alpha * np.conj(b2) - np.conj(alpha) * b2)
    )


def chi_input(spec: InputStateSpec) -> CharacteristicFunction:
    """Closed-form chi of a normalized input state."""
    if spec.kind == "coherent":
        beta = spec.beta
        return CharacteristicFunction(
            lambda a: np.exp(-0.5 * np.abs(a) ** 2 + a * np.conj(beta) - np.conj(a) * beta), 1.0, label="coherent"
        )
    if spec.kind == "single_photon":
        return CharacteristicFunction(
            lambda a: (1.0 - np.abs(a) ** 2) * np.exp(-0.5 * np.abs(a) ** 2), 1.5, label="single_photon"
        )
    if spec.kind == "squeezed_vacuum":
        e2 = math.exp(2.0 * spec.xi)
        return CharacteristicFunction(
            lambda a: np.exp(-0.5 * (e2 * a.real**2 + a.imag**2 / e2)).astype(np.complex128),
            math.exp(spec.xi),
            (math.exp(-spec.xi), math.exp(spec.xi)),
            label="squeezed_vacuum",
        )
    a0, phase = spec.alpha0, np.exp(1j * spec.varphi)
    norm2 = cat_norm_squared(a0, spec.varphi)

    def cat(a):
        total = coherent_element(a0, a0, a) + coherent_element(-a0, -a0, a)
        total = total + phase * coherent_element(a0, -a0, a) + np.conj(phase) * coherent_element(-a0, a0, a)
        return total / norm2

    return CharacteristicFunction(cat, 2.0 * a0 + 1.5, label="cat")


def tmsv_slice_exponent(lam: float, gamma: float) -> float:
    """A in chi_sh = exp(-A|alpha|^2); equals cosh(2r)(1+gamma^2)/2 - gamma sinh(2r)."""
    return ((1.0 + lam * lam) * (1.0 + gamma * gamma) / 2.0 - 2.0 * lam * gamma) / (1.0 - lam * lam)


def nongaussian_slice_terms(lam_prime: float, gamma: float) -> tuple[float, float, float]:
    """(P, Q, B) with chi_sh = (1 + P t + Q t^2) exp(B t), t = |alpha|^2, as printed."""
    lp, g = lam_prime, gamma
    p = lp * (1 + g**2 + 3 * lp**2 - 6 * lp * g + 3 * lp**2 * g**2 - 2 * lp**3 * g) / (1 - lp**4)
    q = lp**2 * (lp - g) ** 2 * (1 - lp * g) ** 2 / ((1 + lp**2) * (1 - lp**2) ** 2)
    b = (1 - lp * g) * (lp - g) / (1 - lp**2)
    return p, q, b


def chi_shared(derived: DerivedParams, resource: str, alpha, use_reduced: bool = False) -> np.ndarray:
    """Shared-state chi on the teleportation slice.

    The TMSV arm uses the raw lambda unless ``use_reduced`` is set, which
    models a TMSV that has passed the subtraction pulse without a click.
    """
    t = np.abs(np.asarray(alpha, dtype=np.complex128)) ** 2
    if resource == "tmsv":
        lam = derived.lam_prime if use_reduced else derived.lam
        return np.exp(-tmsv_slice_exponent(lam, derived.gamma) * t).astype(np.complex128)
    if resource == "nongaussian":
        p, q, b = nongaussian_slice_terms(derived.lam_prime, derived.gamma)
        return ((1.0 + p * t + q * t * t) * np.exp(b * t)).astype(np.complex128)
    raise ValueError(f"unknown resource {resource!r}")


def shared_chi(derived: DerivedParams, resource: str, use_reduced: bool = False) -> CharacteristicFunction:
    if resource == "tmsv":
        lam = derived.lam_prime if use_reduced else derived.lam
        rate = tmsv_slice_exponent(lam, derived.gamma)
    elif resource == "nongaussian":
        rate = -nongaussian_slice_terms(derived.lam_prime, derived.gamma)[2]
    else:
        raise ValueError(f"unknown resource {resource!r}")
    scale = 1.0 / math.sqrt(2.0 * rate)
    return CharacteristicFunction(lambda a: chi_shared(derived, resource, a, use_reduced), scale, label=resource)


def chi_shared_fock(derived: DerivedParams, resource: str, alpha, cutoff: int = DEFAULT_CUTOFF) -> np.ndarray:
    """Tr[rho D(alpha^*) (x) D(gamma alpha)] on the truncated resource state.

    Independent of the closed forms: the state is built in the Fock basis
    and the displacement elements come from the kernels.
    """
    psi = resource_state(resource, derived, cutoff).amplitudes
    flat = np.asarray(alpha, dtype=np.complex128).ravel()
    out = np.empty(flat.size, dtype=np.complex128)
    for k, a in enumerate(flat):
        d_m = kernels.displacement_matrix(np.conj(a), cutoff)
        d_p = kernels.displacement_matrix(derived.gamma * a, cutoff)
        out[k] = np.sum(np.conj(psi) * (d_m @ psi @ d_p.T))
    return out.reshape(np.shape(alpha))


def chi_teleported(
    spec: InputStateSpec, derived: DerivedParams, resource: str, use_reduced: bool = False
) -> CharacteristicFunction:
    return chi_input(spec).times(shared_chi(derived, resource, use_reduced), label=f"teleported/{resource}")


def chi_fock(rho_matrix: np.ndarray, alpha) -> np.ndarray:
    """Tr[rho D(alpha)] for a single-mode density matrix."""
    return kernels.displacement_trace(rho_matrix, alpha)
