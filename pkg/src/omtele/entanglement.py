"""Logarithmic negativity of the two resource states, in closed form and
from the partial transpose of the truncated state."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from omtele import fock, states
from omtele.fock import DEFAULT_CUTOFF, TAIL_TOL, TruncatedState
from omtele.params import DerivedParams

RESOURCES = ("tmsv", "nongaussian")


@dataclass(frozen=True)
class EntanglementResult:
    E_N_analytic: float
    E_N_numeric: float
    cutoff_used: int

    @property
    def discrepancy(self) -> float:
        return abs(self.E_N_analytic - self.E_N_numeric)


def logneg_tmsv_analytic(r: float) -> float:
    if r < 0.0:
        raise ValueError("r must be non-negative")
    return 2.0 * r


def logneg_subtracted_analytic(lam_prime: float) -> float:
    """ln[(1+l)^3 / ((1+l^2)(1-l))] for the photon-and-magnon-subtracted state."""
    if not 0.0 <= lam_prime < 1.0:
        raise ValueError("lambda' must lie in [0, 1)")
    lp = lam_prime
    return 3.0 * math.log1p(lp) - math.log1p(lp * lp) - math.log1p(-lp)


def logneg_numeric(state: TruncatedState, tol: float = TAIL_TOL) -> float:
    """ln(1 + 2 N) with N the negativity of |psi><psi|."""
    if state.modes != 2:
        raise ValueError("log-negativity needs a two-mode state")
    state.check_tail(tol)
    return math.log1p(2.0 * fock.partial_transpose_negativity(state))


def logneg_schmidt(state: TruncatedState) -> float:
    """2 ln(sum_n |c_n|) for a state supported on |n,n> only."""
    amps = state.amplitudes
    if state.modes != 2 or np.any(amps - np.diag(np.diag(amps))):
        raise ValueError("state is not Schmidt-diagonal in the number basis")
    c = np.abs(np.diag(amps))
    return 2.0 * math.log(c.sum() / math.sqrt((c * c).sum()))


def schmidt_coefficients(resource: str, derived: DerivedParams, cutoff: int) -> np.ndarray:
    """Unnormalized closed-form |n,n> coefficients of a resource state."""
    n = np.arange(cutoff + 1)
    if resource == "tmsv":
        return derived.lam**n
    if resource == "nongaussian":
        return (n + 1.0) * derived.lam_prime**n
    raise ValueError(f"unknown resource {resource!r}")


def truncated_logneg(resource: str, derived: DerivedParams, cutoff: int) -> float:
    """Closed-form E_N of the renormalized truncation of a resource state."""
    c = schmidt_coefficients(resource, derived, cutoff)
    return 2.0 * math.log(c.sum() / math.sqrt((c * c).sum()))


def adequate_cutoff(
    resource: str,
    derived: DerivedParams,
    tol: float = TAIL_TOL,
    minimum: int = DEFAULT_CUTOFF,
    logneg_tol: float = 1e-8,
) -> int:
    """Smallest cutoff >= ``minimum`` meeting both truncation targets.

    The probability tail must stay below ``tol`` and truncation must shift
    E_N by at most ``logneg_tol``.  The second condition is the binding one:
    E_N depends on the sum of amplitudes, whose tail decays like lambda^N
    rather than lambda^(2N).
    """
    if resource == "tmsv":
        needed = states.tmsv_required_cutoff(derived.lam, tol)
        exact = logneg_tmsv_analytic(derived.r)
    elif resource == "nongaussian":
        needed = states.subtracted_required_cutoff(derived.lam_prime, tol) if derived.lam_prime > 0 else 1
        exact = logneg_subtracted_analytic(derived.lam_prime)
    else:
        raise ValueError(f"unknown resource {resource!r}")
    cutoff = max(minimum, needed)
    while abs(truncated_logneg(resource, derived, cutoff) - exact) > logneg_tol:
        cutoff += 1
    return cutoff


def resource_state(resource: str, derived: DerivedParams, cutoff: int = DEFAULT_CUTOFF, tol: float = TAIL_TOL) -> TruncatedState:
    if resource == "tmsv":
        return states.tmsv_state(derived.lam, cutoff, tol)
    if resource == "nongaussian":
        return states.subtracted_state(derived, cutoff, tol)[0]
    raise ValueError(f"unknown resource {resource!r}")


def entanglement(resource: str, derived: DerivedParams, cutoff: int | None = None, tol: float = TAIL_TOL) -> EntanglementResult:
    """Closed form against the partial-transpose value.

    With ``cutoff=None`` the smallest adequate cutoff of at least the default
    is chosen, so strongly squeezed states are still resolved.
    """
    if cutoff is None:
        cutoff = adequate_cutoff(resource, derived, tol)
    if resource == "tmsv":
        analytic = logneg_tmsv_analytic(derived.r)
    else:
        analytic = logneg_subtracted_analytic(derived.lam_prime)
    numeric = logneg_numeric(resource_state(resource, derived, cutoff, tol), tol)
    return EntanglementResult(analytic, numeric, cutoff)
