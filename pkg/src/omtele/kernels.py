"""Displacement-operator kernels, compiled when available.

The Cython extension ``omtele._ckernels`` is used if it was built; otherwise
the numpy implementation in ``omtele._pykernels`` is used.  Set
``OMTELE_KERNELS=python`` to force the fallback.
"""

from __future__ import annotations

import importlib
import os
from types import ModuleType

import numpy as np


def load_backend(name: str) -> ModuleType:
    """Import a backend by name ("cython" or "python")."""
    if name == "cython":
        return importlib.import_module("omtele._ckernels")
    if name == "python":
        return importlib.import_module("omtele._pykernels")
    raise ValueError(f"unknown kernel backend {name!r}")


def _select() -> tuple[str, ModuleType]:
    if os.environ.get("OMTELE_KERNELS", "").lower() == "python":
        return "python", load_backend("python")
    try:
        return "cython", load_backend("cython")
    except ImportError:
        return "python", load_backend("python")


BACKEND, _impl = _select()


def displacement_matrix(alpha: complex, cutoff: int) -> np.ndarray:
    """Exact elements <m|D(alpha)|n> for 0 <= m, n <= cutoff.

    These are elements of the infinite-dimensional operator restricted to the
    retained levels, not the exponential of a truncated generator.
    """
    return _impl.displacement_matrix(complex(alpha), int(cutoff))


def displacement_trace(matrix: np.ndarray, alphas) -> np.ndarray:
    """Tr[matrix D(alpha)] for every alpha, shaped like ``alphas``."""
    return _impl.displacement_trace(np.asarray(matrix), np.asarray(alphas, dtype=np.complex128))


def displacement_accumulate(alphas, weights, cutoff: int) -> np.ndarray:
    """Weighted sum of displacement matrices, sum_k w_k D(alpha_k)."""
    return _impl.displacement_accumulate(
        np.asarray(alphas, dtype=np.complex128), np.asarray(weights, dtype=np.complex128), int(cutoff)
    )
