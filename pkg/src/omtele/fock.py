"""Truncated Fock-space states and operators for one or two bosonic modes.

States keep an explicit ``normalized`` flag: annihilation returns
unnormalized vectors and nothing here renormalizes behind the caller's back.
Two-mode amplitudes are indexed ``[n_0, n_1]``; elsewhere in the package
mode 0 is the magnon and mode 1 the Stokes photon.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.linalg import expm
from scipy.sparse.csgraph import connected_components

from omtele.errors import ConvergenceError, ZeroNormError

DEFAULT_CUTOFF = 40
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
TAIL_TOL = 1e-10
EIGENVALUE_TOL = 1e-10
DISPLACEMENT_TAIL_TOL = 1e-8


@dataclass(frozen=True)
class TruncatedState:
    """Amplitudes of a one- or two-mode state, each mode cut at ``cutoff``."""

    amplitudes: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim not in (1, 2):
            raise ValueError("only one- and two-mode states are supported")
        if amps.ndim == 2 and amps.shape[0] != amps.shape[1]:
            raise ValueError("both modes must share the same cutoff")
        if amps.shape[0] < 2:
            raise ValueError("cutoff must be at least 1")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        if self.normalized and abs(np.vdot(amps, amps).real - 1.0) > 1e-12:
            raise ValueError("state flagged normalized but its norm is not 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def modes(self) -> int:
        return self.amplitudes.ndim

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[0] - 1

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))

    @property
    def is_zero(self) -> bool:
        """Zero-norm marker, e.g. after annihilating the vacuum."""
        return not np.any(self.amplitudes)

    def tail_mass(self) -> float:
        """Relative probability that some mode sits in its top retained level."""
        probs = np.abs(self.amplitudes) ** 2
        total = probs.sum()
        if total == 0.0:
            return 0.0
        if self.modes == 1:
            top = probs[-1]
        else:
            top = probs[-1, :].sum() + probs[:, -1].sum() - probs[-1, -1]
        return float(top / total)

    def check_tail(self, tol: float = TAIL_TOL) -> None:
        tail = self.tail_mass()
        if tail > tol:
            raise ConvergenceError(f"truncation tail mass {tail:.3e} exceeds {tol:.1e} at cutoff {self.cutoff}")


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian matrix over the truncated basis of ``modes`` modes."""

    matrix: np.ndarray
    modes: int = 1

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("density matrix must be square")
        if self.modes not in (1, 2):
            raise ValueError("only one- and two-mode operators are supported")
        dim = round(mat.shape[0] ** (1.0 / self.modes))
        if dim**self.modes != mat.shape[0] or dim < 2:
            raise ValueError(f"matrix size {mat.shape[0]} is not a {self.modes}-mode Fock dimension")
        if not np.all(np.isfinite(mat)):
            raise ValueError("matrix entries must be finite")
        if np.max(np.abs(mat - mat.conj().T)) > HERMITICITY_TOL:
            raise ValueError("density matrix is not Hermitian")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def cutoff(self) -> int:
        return round(self.matrix.shape[0] ** (1.0 / self.modes)) - 1

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def is_physical(self, eps: float = EIGENVALUE_TOL) -> bool:
        return bool(abs(self.trace - 1.0) <= TRACE_TOL and self.eigenvalues().min() >= -eps)


def annihilation_op(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1).astype(np.complex128)


def creation_op(cutoff: int) -> np.ndarray:
    return annihilation_op(cutoff).T.copy()


def basis_state(n, cutoff: int = DEFAULT_CUTOFF) -> TruncatedState:
    """Fock state |n> or |n0, n1> (pass a tuple for two modes)."""
    idx = tuple(np.atleast_1d(n))
    if any(k < 0 or k > cutoff for k in idx):
        raise ValueError(f"photon number {n} outside 0..{cutoff}")
    amps = np.zeros((cutoff + 1,) * len(idx), dtype=np.complex128)
    amps[idx] = 1.0
    return TruncatedState(amps, normalized=True)


def coherent_amplitudes(beta: complex, cutoff: int) -> np.ndarray:
    n = np.arange(cutoff + 1)
    amps = np.empty(cutoff + 1, dtype=np.complex128)
    amps[0] = np.exp(-0.5 * abs(beta) ** 2)
    for k in n[1:]:
        amps[k] = amps[k - 1] * beta / np.sqrt(k)
    return amps


def thermal_state(nbar: float, cutoff: int = DEFAULT_CUTOFF) -> DensityOperator:
    """Diagonal thermal state with weights nbar^n / (1+nbar)^(n+1), untruncated weights."""
    if nbar < 0:
        raise ValueError("mean occupation must be non-negative")
    n = np.arange(cutoff + 1)
    weights = (nbar / (1.0 + nbar)) ** n / (1.0 + nbar)
    return DensityOperator(np.diag(weights).astype(np.complex128))


def to_density(state: TruncatedState) -> DensityOperator:
    vec = state.amplitudes.reshape(-1)
    return DensityOperator(np.outer(vec, vec.conj()), modes=state.modes)


def _apply_single_mode(state: TruncatedState, op: np.ndarray, mode_index: int) -> np.ndarray:
    if mode_index not in range(state.modes):
        raise IndexError(f"mode index {mode_index} invalid for a {state.modes}-mode state")
    out = np.tensordot(op, state.amplitudes, axes=(1, mode_index))
    return np.moveaxis(out, 0, mode_index)


def apply_annihilation(state: TruncatedState, mode_index: int = 0) -> TruncatedState:
    """Lower one mode: amplitude on |n-1> becomes sqrt(n) times that on |n>.

    The result is unnormalized; applying this to the vacuum returns the zero
    vector (check ``is_zero``) rather than raising.
    """
    return TruncatedState(_apply_single_mode(state, annihilation_op(state.cutoff), mode_index))


def apply_creation(state: TruncatedState, mode_index: int = 0) -> TruncatedState:
    """Raise one mode.  Amplitude pushed above the cutoff is discarded."""
    return TruncatedState(_apply_single_mode(state, creation_op(state.cutoff), mode_index))


def normalize(state: TruncatedState) -> tuple[TruncatedState, float]:
    """Return the unit-norm state together with the norm it had before."""
    norm = state.norm
    if norm == 0.0:
        raise ZeroNormError("cannot normalize a zero-norm state")
    return TruncatedState(state.amplitudes / norm, normalized=True), norm


def mean_number(state: TruncatedState, mode_index: int = 0) -> float:
    probs = np.abs(state.amplitudes) ** 2
    probs = probs / probs.sum()
    if state.modes == 2:
        probs = probs.sum(axis=1 - mode_index)
    return float(np.dot(np.arange(probs.size), probs))


def displacement_unitary(alpha: complex, cutoff: int) -> np.ndarray:
    """expm(alpha a^dag - alpha^* a) with the generator built in the truncated basis."""
    a = annihilation_op(cutoff)
    return expm(alpha * a.conj().T - np.conj(alpha) * a)


def _pad(obj, cutoff: int):
    extra = cutoff - obj.cutoff
    if isinstance(obj, TruncatedState):
        return TruncatedState(np.pad(obj.amplitudes, [(0, extra)] * obj.modes), normalized=obj.normalized)
    d = obj.cutoff + 1
    mat = obj.matrix.reshape((d,) * (2 * obj.modes))
    mat = np.pad(mat, [(0, extra)] * (2 * obj.modes))
    return DensityOperator(mat.reshape(((cutoff + 1) ** obj.modes,) * 2), modes=obj.modes)


def _top_two_mass(obj, mode_index: int) -> float:
    if isinstance(obj, TruncatedState):
        probs = np.abs(obj.amplitudes) ** 2
    else:
        d = obj.cutoff + 1
        probs = np.real(np.diag(obj.matrix)).reshape((d,) * obj.modes)
    if probs.ndim == 2:
        probs = probs.sum(axis=1 - mode_index)
    return float(probs[-2:].sum() / probs.sum())


def _displace_raw(obj, alpha: complex, mode_index: int):
    u = displacement_unitary(alpha, obj.cutoff)
    if isinstance(obj, TruncatedState):
        return TruncatedState(_apply_single_mode(obj, u, mode_index))
    if obj.modes == 2:
        eye = np.eye(obj.cutoff + 1)
        u = np.kron(u, eye) if mode_index == 0 else np.kron(eye, u)
    mat = u @ obj.matrix @ u.conj().T
    return DensityOperator(0.5 * (mat + mat.conj().T), modes=obj.modes)


def displace(obj, alpha: complex, mode_index: int = 0, tail_tol: float = DISPLACEMENT_TAIL_TOL):
    """Apply D(alpha) to a state vector or density operator.

    Raises ConvergenceError when more than ``tail_tol`` probability lands in
    the top two levels of the displaced mode; the error names the smallest
    cutoff (searched upward in steps of 5) that would pass.
    """
    if mode_index not in range(obj.modes):
        raise IndexError(f"mode index {mode_index} invalid for a {obj.modes}-mode object")
    if alpha == 0:
        return obj
    out = _displace_raw(obj, alpha, mode_index)
    if _top_two_mass(out, mode_index) <= tail_tol:
        if isinstance(out, TruncatedState) and obj.normalized:
            out = TruncatedState(out.amplitudes / out.norm, normalized=True)
        return out
    required = None
    for cutoff in range(obj.cutoff + 5, 4 * obj.cutoff + 60, 5):
        trial = _displace_raw(_pad(obj, cutoff), alpha, mode_index)
        if _top_two_mass(trial, mode_index) <= tail_tol:
            required = cutoff
            break
    raise ConvergenceError(
        f"displacement by {alpha} pushes more than {tail_tol:.0e} probability into the top levels",
        required_cutoff=required,
    )


def overlap_fidelity(a, b) -> float:
    """|<a|b>|^2, <a|rho|a>, or Tr[rho sigma] depending on the argument kinds."""
    if a.modes != b.modes or a.cutoff != b.cutoff:
        raise ValueError("overlap requires matching mode counts and cutoffs")
    if isinstance(a, DensityOperator) and isinstance(b, TruncatedState):
        a, b = b, a
    if isinstance(a, TruncatedState) and isinstance(b, TruncatedState):
        val = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
    elif isinstance(a, TruncatedState):
        vec = a.amplitudes.reshape(-1)
        val = np.vdot(vec, b.matrix @ vec).real
    else:
        val = np.trace(a.matrix @ b.matrix).real
    return float(val)


def number_distribution(obj) -> np.ndarray:
    """P(n) or P(n0, n1) from a state vector or the diagonal of a density operator."""
    if isinstance(obj, TruncatedState):
        return np.abs(obj.amplitudes) ** 2
    d = obj.cutoff + 1
    return np.real(np.diag(obj.matrix)).reshape((d,) * obj.modes)


def partial_transpose(rho: DensityOperator, mode: int = 1) -> np.ndarray:
    """Dense partial transpose of a two-mode operator over ``mode``."""
    if rho.modes != 2:
        raise ValueError("partial transpose needs a two-mode operator")
    d = rho.cutoff + 1
    t = rho.matrix.reshape(d, d, d, d)
    t = t.transpose(0, 3, 2, 1) if mode == 1 else t.transpose(2, 1, 0, 3)
    return t.reshape(d * d, d * d)


def _pure_partial_transpose(state: TruncatedState, mode: int) -> sparse.csr_matrix:
    # Only products of nonzero amplitudes appear, so the matrix is built sparse.
    d = state.cutoff + 1
    i, j = np.nonzero(state.amplitudes)
    v = state.amplitudes[i, j]
    p, q = np.meshgrid(np.arange(i.size), np.arange(i.size), indexing="ij")
    if mode == 1:
        rows, cols = i[p] * d + j[q], i[q] * d + j[p]
    else:
        rows, cols = i[q] * d + j[p], i[p] * d + j[q]
    vals = v[p] * np.conj(v[q])
    return sparse.csr_matrix((vals.ravel(), (rows.ravel(), cols.ravel())), shape=(d * d, d * d))


def _negative_eigen_sum(mat) -> float:
    """|sum of negative eigenvalues|, diagonalizing each decoupled block exactly.

    Blocks of equal size are stacked and diagonalized in one batched call.
    """
    coo = sparse.coo_matrix(mat)
    keep = coo.data != 0.0
    rows, cols, data = coo.row[keep], coo.col[keep], coo.data[keep]
    dim = coo.shape[0]
    mask = sparse.csr_matrix((np.ones(rows.size), (rows, cols)), shape=(dim, dim))
    _, labels = connected_components(mask, directed=False)
    order = np.argsort(labels, kind="stable")
    sizes = np.bincount(labels)
    starts = np.concatenate(([0], np.cumsum(sizes)[:-1]))
    pos = np.empty(dim, dtype=np.int64)
    pos[order] = np.arange(dim) - starts[labels[order]]
    comp = labels[rows]
    total = 0.0
    for size in np.unique(sizes[comp]):
        comps = np.flatnonzero(sizes == size)
        batch = np.full(sizes.size, -1, dtype=np.int64)
        batch[comps] = np.arange(comps.size)
        sel = sizes[comp] == size
        blocks = np.zeros((comps.size, size, size), dtype=np.complex128)
        blocks[batch[comp[sel]], pos[rows[sel]], pos[cols[sel]]] = data[sel]
        ev = np.linalg.eigvalsh(blocks)
        total += -ev[ev < 0.0].sum()
    return float(total)


def partial_transpose_negativity(rho, mode: int = 1) -> float:
    """Negativity: absolute sum of the negative eigenvalues of the partial transpose.

    Accepts a two-mode DensityOperator or a pure two-mode TruncatedState.  The
    partial transpose is assembled with exact entries and split into the
    blocks its sparsity pattern decouples; each block is diagonalized densely.
    """
    if mode not in (0, 1):
        raise ValueError("mode must be 0 or 1")
    if isinstance(rho, TruncatedState):
        if rho.modes != 2:
            raise ValueError("negativity needs a two-mode state")
        return _negative_eigen_sum(_pure_partial_transpose(rho, mode))
    if rho.modes != 2:
        raise ValueError("negativity needs a two-mode operator")
    pt = partial_transpose(rho, mode)
    if np.max(np.abs(pt - pt.conj().T)) > HERMITICITY_TOL:
        raise ValueError("partial transpose is not Hermitian")
    return _negative_eigen_sum(pt)
