"""Closed-form teleportation fidelities, implemented exactly as printed.

Some of the single-photon and squeezed-vacuum expressions disagree with the
quadrature oracle.  They are kept verbatim so the disagreement stays visible;
alternative readings live in ``VARIANTS`` and are judged against the oracle,
never substituted silently.
"""

from __future__ import annotations

import math

from omtele.errors import UnsupportedFormulaError
from omtele.params import DerivedParams
from omtele.states import InputStateSpec


def coherent_tmsv(lam: float, gamma: float) -> float:
    return (2.0 - 2.0 * lam**2) / (3.0 + gamma**2 - 4.0 * lam * gamma - lam**2 * (1.0 - gamma**2))


def coherent_nongaussian(lam_prime: float, gamma: float) -> float:
    lp, g = lam_prime, gamma
    num = (1 - lp**2) ** 3 * ((1 + g) ** 2 - lp * (1 + g) * (1 + g**2) + lp**2 * (1 + g**2))
    den = (1 + lp**2) * (1 + g - lp * (1 + g**2) - lp**2 * (1 - g)) ** 3
    return num / den


def coherent_nongaussian_unit_gain(lam_prime: float) -> float:
    """The gamma = 1 limit of ``coherent_nongaussian``."""
    lp = lam_prime
    return (1 + lp) ** 3 * (lp**2 - 2 * lp + 2) / (4 * (1 + lp**2))


def single_photon_tmsv(lam: float, gamma: float, denominator_power: int = 1) -> float:
    g = gamma
    a0 = 5 + 2 * g**2 + g**4
    a1 = -8 * g - 8 * g**3
    a2 = -6 + 20 * g**2 + 2 * g**4
    a3 = -8 * g - 8 * g**3
    a4 = 5 + 2 * g**2 + g**4
    poly = a0 + a1 * lam + a2 * lam**2 + a3 * lam**3 + a4 * lam**4
    den = 3 + g**2 - 4 * lam * g - lam**2 + lam**2 * g**2
    return 2 * (1 - lam**2) * poly / den**denominator_power


def single_photon_nongaussian(lam_prime: float, gamma: float, bracket_power: int = 1) -> float:
    g, lp = gamma, lam_prime
    b = (
        1 + 2 * g + 2 * g**2 + 2 * g**3 + g**4,
        1 - 3 * g - 6 * g**2 - 6 * g**3 - 7 * g**4 - 3 * g**5,
        -8 * g + 19 * g**2 + 24 * g**3 + 10 * g**4 + 8 * g**5 + 3 * g**6,
        3 - 27 * g - 21 * g**2 - 35 * g**3 - 27 * g**4 - 9 * g**5 - 3 * g**6 - g**7,
        12 + 20 * g + 55 * g**2 + 30 * g**3 + 22 * g**4 + 10 * g**5 + 3 * g**6,
        -7 - 27 * g - 18 * g**2 - 30 * g**3 - 11 * g**4 - 3 * g**5,
        1 + 4 * g + 14 * g**2 + 4 * g**3 + g**4,
    )
    poly = sum(bk * lp**k for k, bk in enumerate(b))
    bracket = 1 + g - lp * (1 + g**2) - lp**2 * (1 - g)
    return poly / ((1 + lp**2) * (1 - lp**2) ** -3 * bracket**bracket_power)


def squeezed_tmsv(lam: float, gamma: float, xi: float) -> float:
    g = gamma
    c0 = (1 + g**2 - 4 * lam * g + lam**2 * (1 + g**2)) / (2 - 2 * lam**2)
    return (1 + 2 * c0 * math.cosh(2 * xi) + c0**2) ** -0.5


def squeezed_nongaussian(lam_prime: float, gamma: float, xi: float) -> float:
    g, lp = gamma, lam_prime
    c2, c4 = math.cosh(2 * xi), math.cosh(4 * xi)
    d = (
        2 + 8 * g**2 + 2 * g**4 + 8 * (g + g**3) * c2 + 4 * g**2 * c4,
        -12 * g - 18 * g**3 - 6 * g**5 - 6 * (1 + 4 * g**2 + 3 * g**4) * c2 - 6 * (g + g**3) * c4,
        # The linear gamma in the last bracket is as printed.
        2 + 15 * g**2 + 22 * g**4 + 6 * g**6 + 8 * (2 * g + 9 * g**3 + 3 * g**5) * c2 + (2 + 7 * g + 2 * g**4) * c4,
        4 * g - 12 * g**3 - 18 * g**5 - 2 * g**7 + 2 * (1 - 7 * g**2 - 9 * g**4 - g**6) * c2 - 2 * (g + g**3) * c4,
        -5 - 6 * g**2 + 15 * g**4 + 6 * g**6 + (1 + 4 * g**2 + g**4) * c4,
        2 * g - 4 * g**3 - 6 * g**5 + 2 * (1 + 4 * g**2 + 3 * g**4) * c2 - 4 * (g + g**3) * c4,
        2 + g**2 + 2 * g**4 - 4 * (g + g**3) * c2 + 3 * g**2 * c4,
    )
    d7 = g - lp - lp * g**2 + lp**2 * g + (1 - lp**2) * math.exp(2 * xi)
    d8 = g - lp - lp * g**2 + lp**2 * g + (1 - lp**2) * math.exp(-2 * xi)
    poly = sum(dk * lp**k for k, dk in enumerate(d))
    return poly / (2 * (1 + lp**2) * (1 - lp**2) ** -3 * (d7 * d8) ** 2.5)


FORMULA_KEYS = {
    ("coherent", "tmsv"): "coherent_tmsv",
    ("coherent", "nongaussian"): "coherent_nongaussian",
    ("single_photon", "tmsv"): "single_photon_tmsv",
    ("single_photon", "nongaussian"): "single_photon_nongaussian",
    ("squeezed_vacuum", "tmsv"): "squeezed_tmsv",
    ("squeezed_vacuum", "nongaussian"): "squeezed_nongaussian",
}

_FUNCTIONS = {
    "coherent_tmsv": coherent_tmsv,
    "coherent_nongaussian": coherent_nongaussian,
    "single_photon_tmsv": single_photon_tmsv,
    "single_photon_nongaussian": single_photon_nongaussian,
    "squeezed_tmsv": squeezed_tmsv,
    "squeezed_nongaussian": squeezed_nongaussian,
}

# Alternative readings of the single-photon expressions, tested against the oracle.
VARIANTS = {
    "single_photon_tmsv": {
        "cubed_denominator": lambda lam, g: single_photon_tmsv(lam, g, denominator_power=3),
    },
    "single_photon_nongaussian": {
        "cubed_bracket": lambda lp, g: single_photon_nongaussian(lp, g, bracket_power=3),
        "fifth_power_bracket": lambda lp, g: single_photon_nongaussian(lp, g, bracket_power=5),
    },
}


def channel_lambda(derived: DerivedParams, resource: str, use_reduced: bool = False) -> float:
    """Squeezing amplitude the formulas take: lambda for tmsv, lambda' for nongaussian."""
    if resource == "nongaussian" or use_reduced:
        return derived.lam_prime
    if resource == "tmsv":
        return derived.lam
    raise ValueError(f"unknown resource {resource!r}")


def printed_fidelity(spec: InputStateSpec, derived: DerivedParams, resource: str, use_reduced: bool = False) -> float:
    """Evaluate the printed closed form for this input and resource."""
    key = FORMULA_KEYS.get((spec.kind, resource))
    if key is None:
        if spec.kind == "cat":
            raise UnsupportedFormulaError("no closed form for cat inputs; use fidelity_quadrature or fidelity_cat")
        raise ValueError(f"unknown resource {resource!r}")
    lam, g = channel_lambda(derived, resource, use_reduced), derived.gamma
    if spec.kind == "squeezed_vacuum":
        return _FUNCTIONS[key](lam, g, spec.xi)
    return _FUNCTIONS[key](lam, g)


def variant_fidelities(spec: InputStateSpec, derived: DerivedParams, resource: str) -> dict[str, float]:
    key = FORMULA_KEYS.get((spec.kind, resource))
    lam = channel_lambda(derived, resource)
    return {name: fn(lam, derived.gamma) for name, fn in VARIANTS.get(key, {}).items()}
