import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from omtele import kernels
from omtele.fock import displacement_unitary
from omtele.kernels import load_backend

BACKENDS = ["python"]
try:
    load_backend("cython")
    BACKENDS.append("cython")
except ImportError:
    pass

amplitudes = st.complex_numbers(max_magnitude=2.5, allow_nan=False, allow_infinity=False)


def mp_element(m, n, alpha):
    """<m|D(alpha)|n> from the associated Laguerre closed form."""
    alpha = mp.mpc(alpha)
    x = abs(alpha) ** 2
    if m >= n:
        k = m - n
        pref = mp.sqrt(mp.factorial(n) / mp.factorial(m)) * alpha**k
        return pref * mp.exp(-x / 2) * mp.laguerre(n, k, x)
    k = n - m
    pref = mp.sqrt(mp.factorial(m) / mp.factorial(n)) * (-mp.conj(alpha)) ** k
    return pref * mp.exp(-x / 2) * mp.laguerre(m, k, x)


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("alpha", [0.0, 0.3 + 0.1j, -1.2j, 2.0 - 1.5j])
def test_matrix_against_laguerre_form(backend, alpha):
    d = load_backend(backend).displacement_matrix(complex(alpha), 12)
    ref = np.array([[complex(mp_element(m, n, alpha)) for n in range(13)] for m in range(13)])
    assert np.max(np.abs(d - ref)) < 1e-13


@pytest.mark.parametrize("backend", BACKENDS)
def test_zero_displacement_is_identity(backend):
    assert np.allclose(load_backend(backend).displacement_matrix(0j, 20), np.eye(21), atol=1e-15)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernel not built")
@given(st.lists(amplitudes, min_size=1, max_size=6))
def test_backends_agree(alphas):
    py, cy = load_backend("python"), load_backend("cython")
    rng = np.random.default_rng(len(alphas))
    m = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    a = np.array(alphas, dtype=np.complex128)
    w = rng.normal(size=a.size) + 0j
    assert np.allclose(py.displacement_trace(m, a), cy.displacement_trace(m, a), atol=1e-12)
    assert np.allclose(py.displacement_accumulate(a, w, 15), cy.displacement_accumulate(a, w, 15), atol=1e-12)
    assert np.allclose(py.displacement_matrix(a[0], 15), cy.displacement_matrix(a[0], 15), atol=1e-13)


@given(amplitudes)
def test_inverse_is_adjoint(alpha):
    # Matrix elements of the infinite operator: D(-a) = D(a)^dag elementwise.
    d = kernels.displacement_matrix(alpha, 25)
    assert np.allclose(kernels.displacement_matrix(-alpha, 25), d.conj().T, atol=1e-13)


def test_low_block_matches_truncated_expm():
    # The truncated-generator exponential converges to the exact elements in its low block.
    alpha = 0.8 - 0.4j
    exact = kernels.displacement_matrix(alpha, 10)
    approx = displacement_unitary(alpha, 60)[:11, :11]
    assert np.max(np.abs(exact - approx)) < 1e-12


def test_trace_and_accumulate_shapes():
    rho = np.diag([1.0, 0, 0, 0]).astype(complex)
    grid = np.zeros((3, 5), dtype=complex)
    assert kernels.displacement_trace(rho, grid).shape == (3, 5)
    acc = kernels.displacement_accumulate(np.array([0j, 0j]), np.array([0.5, 0.5]), 3)
    assert np.allclose(acc, np.eye(4))


def test_vacuum_trace_is_gaussian():
    rho = np.zeros((21, 21), complex)
    rho[0, 0] = 1.0
    alphas = np.array([0.5, 1j, 1 + 1j])
    assert np.allclose(kernels.displacement_trace(rho, alphas), np.exp(-np.abs(alphas) ** 2 / 2), atol=1e-14)
