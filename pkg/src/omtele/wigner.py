"""Wigner functions on phase-space grids.

Convention: beta = (x + i p)/sqrt(2) and the stored grid is normalized so
that Int W dx dp = 1 (vacuum peak 1/pi).  In the beta parametrization the
same function is W_beta = 2 W, normalized against d^2beta (vacuum peak 2/pi).

Fock sources use the displaced-parity formula W_beta(beta) =
(2/pi) Tr[Pi rho D(2 beta)]; characteristic functions use the Fourier
relation W_beta(beta) = (1/pi^2) Int chi(alpha) e^{beta alpha^* - beta^* alpha} d^2alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from omtele import fock, kernels
from omtele.errors import ConvergenceError
from omtele.fock import DensityOperator, TruncatedState
from omtele.parallel import chunks, ordered_map
from omtele.teleport.chi import CharacteristicFunction

DEFAULT_RESOLUTION = 161
DENSITY_TAIL_TOL = 1e-8
_FOURIER_STEP = 0.05
_ROW_CHUNK = 16


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """W(x, p) sampled on a regular grid; ``values[i, j]`` is at (xs[j], ps[i])."""

    x_range: tuple[float, float]
    p_range: tuple[float, float]
    resolution: int
    values: np.ndarray

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(*self.x_range, self.resolution)

    @property
    def ps(self) -> np.ndarray:
        return np.linspace(*self.p_range, self.resolution)

    @property
    def beta_values(self) -> np.ndarray:
        return 2.0 * self.values

    def integral(self) -> float:
        return float(trapezoid(trapezoid(self.values, self.xs, axis=1), self.ps))


def figure_bounds(alpha0: float) -> tuple[float, float]:
    half = alpha0 * math.sqrt(2.0) + 4.0
    return (-half, half)


def _betas(x_range, p_range, resolution) -> np.ndarray:
    xs = np.linspace(*x_range, resolution)
    ps = np.linspace(*p_range, resolution)
    return (xs[None, :] + 1j * ps[:, None]) / math.sqrt(2.0)


def _as_density(source) -> np.ndarray:
    if isinstance(source, TruncatedState):
        if source.modes != 1:
            raise ValueError("Wigner maps need a single-mode state")
        source.check_tail()
        return fock.to_density(source).matrix
    if source.modes != 1:
        raise ValueError("Wigner maps need a single-mode operator")
    diag = np.real(np.diag(source.matrix))
    if diag[-2:].sum() > DENSITY_TAIL_TOL * max(diag.sum(), 1e-300):
        raise ConvergenceError(f"density operator has {diag[-2:].sum():.2e} probability in its top levels")
    return source.matrix


def wigner_parity(rho: np.ndarray, betas: np.ndarray, threads: int = 1) -> np.ndarray:
    """W_beta on arbitrary points from a single-mode density matrix."""
    parity = (-1.0) ** np.arange(rho.shape[0])
    pi_rho = np.ascontiguousarray(parity[:, None] * rho)
    rows = ordered_map(
        lambda sl: kernels.displacement_trace(pi_rho, 2.0 * betas[sl]),
        chunks(betas.shape[0], _ROW_CHUNK),
        threads,
    )
    return (2.0 / math.pi) * np.concatenate(rows, axis=0).real


def wigner_fourier(chi: CharacteristicFunction, xs: np.ndarray, ps: np.ndarray) -> np.ndarray:
    """W_beta on the (x, p) grid via a separable 2-D Fourier sum of chi."""
    # chi itself (not a product of two chis) must have decayed at the box edge.
    hu, hv = (max(8.0, 6.0 * s) for s in chi.axis_scales)
    us = np.linspace(-hu, hu, 2 * math.ceil(hu / _FOURIER_STEP) + 1)
    vs = np.linspace(-hv, hv, 2 * math.ceil(hv / _FOURIER_STEP) + 1)
    wu = np.full(us.size, us[1] - us[0])
    wu[[0, -1]] *= 0.5
    wv = np.full(vs.size, vs[1] - vs[0])
    wv[[0, -1]] *= 0.5
    c = chi(us[None, :] + 1j * vs[:, None])
    # beta alpha^* - beta^* alpha = i sqrt(2) (p u - x v)
    e_p = np.exp(1j * math.sqrt(2.0) * np.outer(ps, us)) * wu[None, :]
    e_x = np.exp(-1j * math.sqrt(2.0) * np.outer(xs, vs)) * wv[None, :]
    return (e_p @ c.T @ e_x.T).real / math.pi**2


def wigner_map(
    source,
    x_range: tuple[float, float] = (-5.0, 5.0),
    p_range: tuple[float, float] = (-5.0, 5.0),
    resolution: int = DEFAULT_RESOLUTION,
    threads: int = 1,
) -> PhaseSpaceGrid:
    """Wigner grid (x, p convention) of a state, density operator or chi."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if isinstance(source, CharacteristicFunction):
        xs = np.linspace(*x_range, resolution)
        ps = np.linspace(*p_range, resolution)
        w_beta = wigner_fourier(source, xs, ps)
    else:
        w_beta = wigner_parity(_as_density(source), _betas(x_range, p_range, resolution), threads)
    return PhaseSpaceGrid(tuple(x_range), tuple(p_range), resolution, 0.5 * w_beta)


def wigner_negativity(grid: PhaseSpaceGrid, convention: str = "beta") -> tuple[float, float]:
    """(minimum value, integral of |W| where W < 0).

    The minimum is reported in the requested convention; the negative volume
    is the same in both.
    """
    if convention not in ("beta", "xp"):
        raise ValueError("convention must be 'beta' or 'xp'")
    neg = np.where(grid.values < 0.0, -grid.values, 0.0)
    volume = float(trapezoid(trapezoid(neg, grid.xs, axis=1), grid.ps))
    minimum = float(grid.values.min())
    return (2.0 * minimum if convention == "beta" else minimum), volume


def cat_wigner_beta(alpha0: float, varphi: float, betas) -> np.ndarray:
    """Closed-form W_beta of the normalized cat |alpha0> + e^{i varphi}|-alpha0>, real alpha0."""
    b = np.asarray(betas, dtype=np.complex128)
    norm2 = 2.0 * (1.0 + math.exp(-2.0 * alpha0**2) * math.cos(varphi))
    lobes = np.exp(-2.0 * np.abs(b - alpha0) ** 2) + np.exp(-2.0 * np.abs(b + alpha0) ** 2)
    fringes = 2.0 * np.exp(-2.0 * np.abs(b) ** 2) * np.cos(4.0 * alpha0 * b.imag + varphi)
    return (2.0 / math.pi) * (lobes + fringes) / norm2
