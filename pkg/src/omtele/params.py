"""Physical pulse and coupling parameters, the channel parameters derived from
them, the displacement-pulse solver, and ODE oracles for the adiabatic
closed forms.

Internally every rate is an angular frequency in rad/s and every duration is
in seconds.  Lab units (rate/2pi in MHz, durations in ns) are handled only by
``PhysicalParams.from_lab_units`` and ``to_lab_units``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, fields
from typing import Callable

import numpy as np

from omtele.errors import GuardError, GuardWarning, InstabilityError

MHZ = 2.0 * math.pi * 1e6
NS = 1e-9

COUPLING_WARN = 0.1
COUPLING_ERROR = 0.3
DISSIPATION_WARN = 0.1
DISSIPATION_ERROR = 1.0
P_SUB_WARN = 0.05
_SLACK = 1e-9

RATE_FIELDS = ("G1", "kappa1", "g_c", "kappa_c", "kappa_m")
TIME_FIELDS = ("tau_e", "tau_s", "tau_d", "tau_r")


@dataclass(frozen=True)
class PhysicalParams:
    G1: float
    kappa1: float
    g_c: float
    kappa_c: float
    kappa_m: float
    tau_e: float
    tau_s: float
    tau_d: float
    tau_r: float = 0.0
    metadata: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        for name in RATE_FIELDS + TIME_FIELDS:
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
        for name in ("kappa1", "kappa_c", "kappa_m"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        # Zero couplings are allowed: they are the decoupled limits of the oracles.
        for name in ("G1", "g_c") + TIME_FIELDS:
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")

    @classmethod
    def from_lab_units(cls, *, metadata=None, **values) -> "PhysicalParams":
        """Build from rates given as value/2pi in MHz and durations in ns."""
        unknown = set(values) - set(RATE_FIELDS) - set(TIME_FIELDS)
        if unknown:
            raise ValueError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        kwargs = {}
        for name, value in values.items():
            kwargs[name] = float(value) * (MHZ if name in RATE_FIELDS else NS)
        return cls(**kwargs, metadata=dict(metadata or {}))

    def to_lab_units(self) -> dict:
        out = {name: getattr(self, name) / MHZ for name in RATE_FIELDS}
        out.update({name: getattr(self, name) / NS for name in TIME_FIELDS})
        return out

    @classmethod
    def paper(cls) -> "PhysicalParams":
        """The reference parameter set used throughout the figures."""
        return cls.from_lab_units(
            G1=10.0, kappa1=100.0, g_c=4.0, kappa_c=40.0, kappa_m=0.5,
            tau_e=50.0, tau_s=4.0, tau_d=10.0, tau_r=0.0,
        )

    def replace(self, **changes) -> "PhysicalParams":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return PhysicalParams(**values)

    @property
    def tau_total(self) -> float:
        return self.tau_e + self.tau_s + self.tau_d + self.tau_r

    def guard_messages(self) -> list[str]:
        """Warning-band messages for the approximations; raises GuardError past the error band."""
        messages = []
        for label, ratio in (("G1/kappa1", self.G1 / self.kappa1), ("g_c/kappa_c", self.g_c / self.kappa_c)):
            if ratio > COUPLING_ERROR * (1.0 + _SLACK):
                raise GuardError(f"{label} = {ratio:.4g} exceeds {COUPLING_ERROR}; adiabatic elimination fails")
            if ratio > COUPLING_WARN * (1.0 + _SLACK):
                messages.append(f"{label} = {ratio:.4g} is above {COUPLING_WARN}")
        loss = self.kappa_m * self.tau_total
        if loss > DISSIPATION_ERROR * (1.0 + _SLACK):
            raise GuardError(f"kappa_m * tau_total = {loss:.4g}; magnon decay during the protocol is not negligible")
        if loss > DISSIPATION_WARN * (1.0 + _SLACK):
            messages.append(f"kappa_m * tau_total = {loss:.4g} is above {DISSIPATION_WARN}")
        return messages

    def check_guards(self) -> None:
        """Emit each guard message as a GuardWarning (GuardError past the error band)."""
        for message in self.guard_messages():
            warnings.warn(message, GuardWarning, stacklevel=3)


@dataclass(frozen=True)
class DerivedParams:
    """Dimensionless channel parameters.

    ``script_G1`` and ``script_Gc`` are None when the record was built
    directly from channel values with ``from_channel``.
    """

    script_G1: float | None
    script_Gc: float | None
    r: float
    lam: float
    theta: float
    lam_prime: float
    gamma: float
    p_sub: float

    def __post_init__(self):
        if not 0.0 <= self.lam < 1.0:
            raise ValueError("lambda must lie in [0, 1)")
        if not 0.0 <= self.lam_prime <= self.lam:
            raise ValueError("lambda' must lie in [0, lambda]")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must lie in (0, 1]")

    @classmethod
    def from_channel(cls, lam: float, gamma: float = 1.0, lam_prime: float | None = None) -> "DerivedParams":
        """Channel parameters without a pulse history (theta from lam'/lam)."""
        lam_prime = lam if lam_prime is None else lam_prime
        theta = math.acos(min(1.0, lam_prime / lam)) if lam > 0.0 else 0.0
        return cls(
            script_G1=None, script_Gc=None, r=math.atanh(lam), lam=lam, theta=theta,
            lam_prime=lam_prime, gamma=gamma, p_sub=math.tan(theta) ** 2,
        )


def derive_params(p: PhysicalParams, check: bool = True) -> DerivedParams:
    """cosh r = exp(G1^2 tau_e / kappa1), cos theta = exp(-Gc tau_s), gamma = exp(-Gc tau_d)."""
    if check:
        p.check_guards()
    sg1 = p.G1**2 / p.kappa1
    sgc = p.g_c**2 / p.kappa_c
    x = sg1 * p.tau_e
    # expm1 keeps r and lambda accurate when the pulse area is tiny.
    r = math.asinh(math.sqrt(math.expm1(2.0 * x)))
    lam = math.sqrt(-math.expm1(-2.0 * x))
    if lam >= 1.0:
        raise GuardError(f"squeezing r = {r:.4g} is too large: lambda rounds to 1")
    cos_theta = math.exp(-sgc * p.tau_s)
    p_sub = math.expm1(2.0 * sgc * p.tau_s)
    if check and p_sub > P_SUB_WARN:
        warnings.warn(p_sub_message(p_sub), GuardWarning, stacklevel=2)
    return DerivedParams(
        script_G1=sg1, script_Gc=sgc, r=r, lam=lam, theta=math.acos(cos_theta),
        lam_prime=lam * cos_theta, gamma=math.exp(-sgc * p.tau_d), p_sub=p_sub,
    )


def p_sub_message(p_sub: float) -> str | None:
    return f"subtraction probability {p_sub:.4g} is above {P_SUB_WARN}" if p_sub > P_SUB_WARN else None


@dataclass(frozen=True)
class DisplacementPulse:
    E_d: float
    phi: float
    alpha_D: complex


def solve_displacement_pulse(alpha_D: complex, p: PhysicalParams) -> DisplacementPulse:
    """Drive strength and phase that displace the magnon mean by ``alpha_D``."""
    alpha_D = complex(alpha_D)
    if p.tau_d <= 0.0:
        raise ValueError("tau_d = 0: no displacement is reachable")
    if p.g_c <= 0.0:
        raise ValueError("g_c must be positive to displace the magnon")
    if alpha_D == 0:
        return DisplacementPulse(0.0, 0.0, alpha_D)
    one_minus_gamma = -math.expm1(-p.g_c**2 / p.kappa_c * p.tau_d)
    return DisplacementPulse(
        E_d=abs(alpha_D) * p.g_c / one_minus_gamma,
        phi=math.atan2(alpha_D.imag, alpha_D.real) + math.pi / 2.0,
        alpha_D=alpha_D,
    )


def magnon_mean_closed_form(m0: complex, pulse: DisplacementPulse, p: PhysicalParams) -> complex:
    """Adiabatic magnon mean after the displacement pulse: gamma m0 + i(gamma-1) E_d e^{i phi}/g_c."""
    gamma = math.exp(-p.g_c**2 / p.kappa_c * p.tau_d)
    drive = 0.0 if pulse.E_d == 0.0 else 1j * (gamma - 1.0) * pulse.E_d * np.exp(1j * pulse.phi) / p.g_c
    return complex(gamma * m0 + drive)


def _rk4(rhs: Callable[[np.ndarray], np.ndarray], y0: np.ndarray, t_end: float, dt: float, scale: float) -> np.ndarray:
    steps = max(1, math.ceil(t_end / dt - 1e-9))
    h = t_end / steps
    y = np.array(y0, dtype=np.complex128)
    limit = 1e6 * max(1.0, scale)
    for _ in range(steps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > limit:
            raise InstabilityError("integration diverged; reduce the step")
    return y


def displacement_ode_oracle(alpha_D: complex, m0: complex, p: PhysicalParams, dt: float | None = None) -> complex:
    """Integrate the cavity and magnon mean equations over tau_d, returning <m(tau_d)>.

    The drive is the pulse from ``solve_displacement_pulse``; with g_c = 0 the
    magnon is decoupled and no pulse is needed.
    """
    dt = 0.005 / p.kappa_c if dt is None else dt
    if dt > 0.01 / p.kappa_c * (1.0 + _SLACK):
        raise ValueError("step must satisfy dt <= 0.01/kappa_c")
    if p.g_c == 0.0:
        return complex(m0)
    pulse = solve_displacement_pulse(alpha_D, p)
    drive = pulse.E_d * np.exp(1j * pulse.phi)
    kc, gc = p.kappa_c, p.g_c

    def rhs(y):
        c, m = y
        return np.array([-kc * c - 1j * gc * m + drive, -1j * gc * c])

    if p.tau_d == 0.0:
        return complex(m0)
    y = _rk4(rhs, np.array([0.0, m0], dtype=np.complex128), p.tau_d, dt, abs(m0) + abs(alpha_D))
    return complex(y[1])


def covariance_ode_oracle(p: PhysicalParams, dt: float | None = None) -> float:
    """Magnon occupancy <m^dag m>(tau_e) under G1(a m + a^dag m^dag), optical decay kappa1, vacuum noise.

    Moments: N_a = <a^dag a>, N_m = <m^dag m>, C = <a m>, all starting at zero.
    """
    dt = 0.005 / p.kappa1 if dt is None else dt
    if dt > 0.01 / p.kappa1 * (1.0 + _SLACK):
        raise ValueError("step must satisfy dt <= 0.01/kappa1")
    if p.tau_e == 0.0 or p.G1 == 0.0:
        return 0.0
    k, g = p.kappa1, p.G1

    def rhs(y):
        n_a, n_m, c = y
        return np.array([
            -2.0 * k * n_a - 2.0 * g * c.imag,
            -2.0 * g * c.imag,
            -k * c - 1j * g * (n_m + n_a + 1.0),
        ])

    target_scale = math.expm1(2.0 * g * g / k * p.tau_e)
    y = _rk4(rhs, np.zeros(3, dtype=np.complex128), p.tau_e, dt, target_scale)
    return float(y[1].real)
