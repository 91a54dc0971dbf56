"""Pure-numpy implementation of the displacement kernels.

Same algorithm as the compiled module, vectorised over the displacement
arguments instead of looping over them.  Used when the extension is not
built, and as the reference the compiled kernel is tested against.
"""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln

_CHUNK = 1024


def _tensor(alphas: np.ndarray, dim: int) -> np.ndarray:
    """<m|D(alpha)|n> for every alpha: shape (len(alphas), dim, dim)."""
    alphas = np.asarray(alphas, dtype=np.complex128).ravel()
    x = alphas.real**2 + alphas.imag**2
    r = np.sqrt(x)
    nonzero = r > 0.0
    u = np.ones_like(alphas)
    u[nonzero] = alphas[nonzero] / r[nonzero]
    log_r = np.zeros_like(r)
    log_r[nonzero] = np.log(r[nonzero])

    out = np.zeros((alphas.size, dim, dim), dtype=np.complex128)
    pp = np.ones_like(alphas)
    pm = np.ones_like(alphas)
    neg_uc = -np.conj(u)
    for k in range(dim):
        if k == 0:
            ell = np.exp(-0.5 * x)
        else:
            ell = np.where(nonzero, np.exp(k * log_r - 0.5 * gammaln(k + 1.0) - 0.5 * x), 0.0)
        ell_prev = np.zeros_like(ell)
        s_prev = 0.0
        for n in range(dim - k):
            out[:, n + k, n] = ell * pp
            if k > 0:
                out[:, n, n + k] = ell * pm
            s_n = np.sqrt((n + 1.0) / (n + k + 1.0))
            ell_next = s_n * ((2.0 * n + 1.0 + k - x) * ell - (n + k) * s_prev * ell_prev) / (n + 1.0)
            ell_prev, ell, s_prev = ell, ell_next, s_n
        pp = pp * u
        pm = pm * neg_uc
    return out


def displacement_matrix(alpha: complex, cutoff: int) -> np.ndarray:
    return _tensor(np.array([alpha]), cutoff + 1)[0]


def displacement_trace(matrix, alphas) -> np.ndarray:
    """out[k] = Tr[matrix @ D(alphas[k])]."""
    m = np.asarray(matrix, dtype=np.complex128)
    flat = np.asarray(alphas, dtype=np.complex128).ravel()
    res = np.empty(flat.size, dtype=np.complex128)
    for start in range(0, flat.size, _CHUNK):
        block = _tensor(flat[start : start + _CHUNK], m.shape[0])
        res[start : start + _CHUNK] = np.einsum("ij,kji->k", m, block)
    return res.reshape(np.shape(alphas))


def displacement_accumulate(alphas, weights, cutoff: int) -> np.ndarray:
    """Return sum_k weights[k] * D(alphas[k])."""
    flat = np.asarray(alphas, dtype=np.complex128).ravel()
    w = np.asarray(weights, dtype=np.complex128).ravel()
    if w.size != flat.size:
        raise ValueError("alphas and weights must have the same size")
    dim = cutoff + 1
    res = np.zeros((dim, dim), dtype=np.complex128)
    keep = w != 0.0
    flat, w = flat[keep], w[keep]
    for start in range(0, flat.size, _CHUNK):
        block = _tensor(flat[start : start + _CHUNK], dim)
        res += np.tensordot(w[start : start + _CHUNK], block, axes=(0, 0))
    return res
