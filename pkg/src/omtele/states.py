"""Protocol states: the two-mode squeezed vacuum, its reduced-squeezing
variant, the photon-and-magnon-subtracted state, and single-mode inputs.

Two-mode states are indexed ``[n_magnon, n_photon]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from omtele import fock
from omtele.errors import ConvergenceError, ZeroNormError
from omtele.fock import DEFAULT_CUTOFF, TAIL_TOL, TruncatedState
from omtele.params import DerivedParams

INPUT_KINDS = ("coherent", "single_photon", "squeezed_vacuum", "cat")
MAGNON, PHOTON = 0, 1


@dataclass(frozen=True)
class InputStateSpec:
    """Single-mode input to be teleported.  Only the fields for ``kind`` are read."""

    kind: str
    beta: complex = 0j
    xi: float = 0.0
    alpha0: float = 0.0
    varphi: float = 0.0

    def __post_init__(self):
        if self.kind not in INPUT_KINDS:
            raise ValueError(f"unknown input kind {self.kind!r}; expected one of {INPUT_KINDS}")
        object.__setattr__(self, "beta", complex(self.beta))
        for name in ("xi", "alpha0", "varphi"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.kind == "squeezed_vacuum" and self.xi < 0.0:
            raise ValueError("xi must be non-negative")

    @classmethod
    def coherent(cls, beta: complex = 0j):
        return cls("coherent", beta=beta)

    @classmethod
    def single_photon(cls):
        return cls("single_photon")

    @classmethod
    def squeezed(cls, xi: float):
        return cls("squeezed_vacuum", xi=xi)

    @classmethod
    def cat(cls, alpha0: float, varphi: float = 0.0):
        return cls("cat", alpha0=alpha0, varphi=varphi)


def tmsv_required_cutoff(lam: float, tol: float = TAIL_TOL) -> int:
    """Smallest N with lambda^(2N) <= tol."""
    if lam == 0.0:
        return 1
    return max(1, math.ceil(math.log(tol) / (2.0 * math.log(lam))))


def subtracted_tail(lam_prime: float, cutoff: int) -> float:
    """Probability of the subtracted state on |N,N>: (N+1)^2 x^N (1-x)^3/(1+x), x = lam'^2."""
    x = lam_prime**2
    return (cutoff + 1) ** 2 * x**cutoff * (1.0 - x) ** 3 / (1.0 + x)


def subtracted_required_cutoff(lam_prime: float, tol: float = TAIL_TOL) -> int:
    n = 1
    while subtracted_tail(lam_prime, n) > tol:
        n += 1
    return n


def tmsv_state(lam: float, cutoff: int = DEFAULT_CUTOFF, tol: float = TAIL_TOL) -> TruncatedState:
    """sqrt(1-lam^2) lam^n on |n,n>, renormalized over the retained levels."""
    if not 0.0 <= lam < 1.0:
        raise ValueError("lambda must lie in [0, 1)")
    if lam > 0.0 and lam ** (2 * cutoff) > tol:
        raise ConvergenceError(
            f"geometric tail lambda^(2N) = {lam ** (2 * cutoff):.2e} exceeds {tol:.0e}",
            required_cutoff=tmsv_required_cutoff(lam, tol),
        )
    coeffs = math.sqrt(1.0 - lam * lam) * lam ** np.arange(cutoff + 1)
    coeffs /= np.linalg.norm(coeffs)
    return TruncatedState(np.diag(coeffs), normalized=True)


def reduced_tmsv(derived: DerivedParams, cutoff: int = DEFAULT_CUTOFF, tol: float = TAIL_TOL) -> TruncatedState:
    """TMSV with lambda replaced by lambda' = tanh(r) cos(theta)."""
    return tmsv_state(derived.lam_prime, cutoff, tol)


def subtracted_state(
    derived: DerivedParams,
    cutoff: int = DEFAULT_CUTOFF,
    tol: float = TAIL_TOL,
    magnon_first: bool = True,
) -> tuple[TruncatedState, float]:
    """Subtract one magnon and one photon from the reduced TMSV.

    Returns the normalized state and its squared norm before normalization
    (the relative conditional weight).  The reduced TMSV is built one level
    higher so the lowered state is exact up to the cutoff.
    """
    tail = subtracted_tail(derived.lam_prime, cutoff)
    if derived.lam_prime > 0.0 and tail > tol:
        raise ConvergenceError(
            f"subtracted-state tail {tail:.2e} exceeds {tol:.0e}",
            required_cutoff=subtracted_required_cutoff(derived.lam_prime, tol),
        )
    lam = derived.lam_prime
    coeffs = math.sqrt(1.0 - lam * lam) * lam ** np.arange(cutoff + 2)
    state = TruncatedState(np.diag(coeffs))
    order = (MAGNON, PHOTON) if magnon_first else (PHOTON, MAGNON)
    for mode in order:
        state = fock.apply_annihilation(state, mode)
    state = TruncatedState(state.amplitudes[: cutoff + 1, : cutoff + 1])
    normalized, norm = fock.normalize(state)
    return normalized, norm * norm


def subtracted_weight(lam_prime: float) -> float:
    """Closed-form squared norm of (m a) applied to the reduced TMSV: x(1+x)/(1-x)^2."""
    x = lam_prime**2
    return x * (1.0 + x) / (1.0 - x) ** 2


def subtracted_distribution(lam_prime: float, cutoff: int = DEFAULT_CUTOFF) -> np.ndarray:
    """Closed-form diagonal law P(k,k) = (k+1)^2 x^k (1-x)^3/(1+x)."""
    x = lam_prime**2
    k = np.arange(cutoff + 1)
    return (k + 1.0) ** 2 * x**k * (1.0 - x) ** 3 / (1.0 + x)


def heralding_report(derived: DerivedParams, reflectivity: float = 0.05) -> dict:
    """Approximate heralding probabilities for the two subtractions.

    The magnon side uses tan^2(theta).  The photon side is the
    low-reflectivity estimate R <n_photon> evaluated on the state left after
    the magnon subtraction, (1+x)/(1-x) photons on average; it depends on
    the beam-splitter reflectivity and is only indicative.
    """
    if not 0.0 < reflectivity < 1.0:
        raise ValueError("reflectivity must lie in (0, 1)")
    x = derived.lam_prime**2
    photon = reflectivity * (1.0 + x) / (1.0 - x)
    return {
        "magnon_probability": derived.p_sub,
        "photon_probability_approx": photon,
        "joint_probability_approx": derived.p_sub * photon,
        "reflectivity": reflectivity,
    }


def _squeezed_amplitudes(xi: float, cutoff: int) -> np.ndarray:
    # S(xi)|0> = cosh(xi)^(-1/2) sum_n (-tanh xi)^n sqrt((2n)!)/(2^n n!) |2n>
    amps = np.zeros(cutoff + 1, dtype=np.complex128)
    n = np.arange(cutoff // 2 + 1)
    if xi == 0.0:
        amps[0] = 1.0
        return amps
    t = math.tanh(xi)
    log_mag = 0.5 * gammaln(2 * n + 1.0) - n * math.log(2.0) - gammaln(n + 1.0) + n * math.log(t)
    amps[2 * n] = (-1.0) ** n * np.exp(log_mag) / math.sqrt(math.cosh(xi))
    return amps


def cat_norm_squared(alpha0: float, varphi: float) -> float:
    """Squared norm of |alpha0> + e^{i varphi}|-alpha0>."""
    return 2.0 * (1.0 + math.exp(-2.0 * alpha0**2) * math.cos(varphi))


def _raw_input(spec: InputStateSpec, cutoff: int) -> np.ndarray:
    if spec.kind == "coherent":
        return fock.coherent_amplitudes(spec.beta, cutoff)
    if spec.kind == "squeezed_vacuum":
        return _squeezed_amplitudes(spec.xi, cutoff)
    plus = fock.coherent_amplitudes(spec.alpha0, cutoff)
    minus = fock.coherent_amplitudes(-spec.alpha0, cutoff)
    return plus + np.exp(1j * spec.varphi) * minus


def _top_two(amps: np.ndarray) -> float:
    # Two levels, so parity-restricted states (squeezed, cat) are not missed.
    probs = np.abs(amps) ** 2
    total = probs.sum()
    return float(probs[-2:].sum() / total) if total > 0.0 else 0.0


def input_state(spec: InputStateSpec, cutoff: int = DEFAULT_CUTOFF, tol: float = TAIL_TOL) -> TruncatedState:
    """Normalized single-mode input state in the truncated basis.

    Coherent and cat amplitudes must satisfy |amplitude|^2 <= cutoff/4, and
    every kind must leave at most ``tol`` probability in the top two levels.
    """
    if spec.kind == "single_photon":
        return fock.basis_state(1, cutoff)
    if spec.kind == "coherent":
        _amplitude_guard(abs(spec.beta), cutoff)
    elif spec.kind == "cat":
        _amplitude_guard(spec.alpha0, cutoff)
        # e^{i pi} is not exactly -1 in floating point, so test the closed form.
        if cat_norm_squared(spec.alpha0, spec.varphi) < 1e-12:
            raise ZeroNormError("cat superposition has zero norm")
    amps = _raw_input(spec, cutoff)
    tail = _top_two(amps)
    if tail > tol:
        required = cutoff + 2
        while _top_two(_raw_input(spec, required)) > tol:
            required += 2
        raise ConvergenceError(f"input-state tail {tail:.2e} exceeds {tol:.0e} at cutoff {cutoff}", required)
    return fock.normalize(TruncatedState(amps))[0]


def _amplitude_guard(amplitude: float, cutoff: int) -> None:
    if amplitude**2 > cutoff / 4.0:
        raise ConvergenceError(
            f"|amplitude|^2 = {amplitude ** 2:.3g} exceeds cutoff/4",
            required_cutoff=math.ceil(4.0 * amplitude**2),
        )


def joint_number_distribution(state: TruncatedState) -> np.ndarray:
    """(n_magnon, n_photon) probability grid of a two-mode state."""
    if state.modes != 2:
        raise ValueError("joint distribution needs a two-mode state")
    return fock.number_distribution(state)
