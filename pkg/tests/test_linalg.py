import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from breidbart.exceptions import DomainError
from breidbart.linalg import (
    canonical_phase,
    eig_hermitian,
    is_unitary,
    principal_unitary_sqrt,
    projector,
    tensor,
    trace_product,
)
from breidbart.mub import fourier_basis

from conftest import random_hermitian, random_state, random_unitary


def test_tensor_basis_vectors():
    e0 = np.array([1, 0])
    out = tensor(e0, e0)
    assert np.allclose(out, [1, 0, 0, 0])


def test_tensor_layout():
    u = np.array([1, 2j, 3])
    v = np.array([5, 7, 11])
    out = tensor(u, v)
    for i in range(3):
        for j in range(3):
            assert out[i * 3 + j] == u[i] * v[j]


def test_tensor_norm_multiplies(rng):
    for _ in range(100):
        dim = rng.integers(1, 6)
        u, v = rng.normal(size=dim) + 1j * rng.normal(size=dim), rng.normal(size=dim)
        assert np.isclose(np.linalg.norm(tensor(u, v)), np.linalg.norm(u) * np.linalg.norm(v))


def test_tensor_rejects_empty():
    with pytest.raises(DomainError):
        tensor([], [1])


def test_eig_identity_and_diagonal():
    w, _ = eig_hermitian(np.eye(3))
    assert np.allclose(w, [1, 1, 1])
    w, V = eig_hermitian(np.diag([-1.0, 2.0]))
    assert np.allclose(w, [2, -1])
    assert np.allclose(V[:, 0], [0, 1]) and np.allclose(V[:, 1], [1, 0])


@pytest.mark.parametrize("dim", [2, 3, 5, 9, 16])
def test_eig_reconstruction(rng, dim):
    M = random_hermitian(rng, dim)
    w, V = eig_hermitian(M)
    assert np.all(np.diff(w) <= 0)
    assert np.max(np.abs((V * w) @ V.conj().T - M)) <= 1e-9
    assert np.max(np.abs(M @ V - V * w)) <= 1e-9
    assert np.max(np.abs(V.conj().T @ V - np.eye(dim))) <= 1e-9
    assert np.isclose(w.sum(), np.trace(M).real, atol=1e-9)


def test_eig_rejects_non_hermitian():
    with pytest.raises(DomainError):
        eig_hermitian(np.array([[0, 1], [0, 0]]))


def test_sqrt_identity():
    assert np.allclose(principal_unitary_sqrt(np.eye(4)), np.eye(4))


def test_sqrt_branch_minus_one():
    R = principal_unitary_sqrt(np.diag([1, -1]))
    assert np.max(np.abs(R - np.diag([1, 1j]))) <= 1e-12


def test_sqrt_fourier_squares_back():
    F3 = fourier_basis(3).basis_a_prime
    R = principal_unitary_sqrt(F3)
    assert np.max(np.abs(R @ R - F3)) <= 1e-9
    assert is_unitary(R, 1e-9)


def test_sqrt_eigenphases_are_halved():
    F5 = fourier_basis(5).basis_a_prime
    R = principal_unitary_sqrt(F5)
    phases = np.angle(np.linalg.eigvals(R))
    assert np.all(phases > -np.pi / 2 - 1e-9) and np.all(phases <= np.pi / 2 + 1e-9)


def test_sqrt_rejects_non_unitary():
    with pytest.raises(DomainError):
        principal_unitary_sqrt(np.diag([1.0, 2.0]))


@settings(max_examples=40, deadline=None)
@given(dim=st.integers(1, 16), seed=st.integers(0, 2**32 - 1))
def test_sqrt_property(dim, seed):
    U = random_unitary(np.random.default_rng(seed), dim)
    R = principal_unitary_sqrt(U)
    assert np.max(np.abs(R @ R - U)) <= 1e-9
    assert is_unitary(R, 1e-9)


def test_sqrt_degenerate_eigenvalues():
    # reflection with a two-fold -1 eigenvalue
    v = np.array([1, 1j, 0, 1]) / np.sqrt(3)
    U = np.eye(4) - 2 * projector(v) - 2 * projector([0, 0, 1, 0])
    R = principal_unitary_sqrt(U)
    assert np.max(np.abs(R @ R - U)) <= 1e-9


def test_trace_product():
    rho = projector([1, 0])
    assert trace_product(rho, np.eye(2)) == pytest.approx(1)
    assert trace_product(rho, rho) == pytest.approx(1)
    with pytest.raises(DomainError):
        trace_product(rho, np.eye(3))


def test_trace_product_linearity(rng):
    N = 3
    psi = np.eye(N).reshape(-1) / np.sqrt(N)
    lam = 0.37
    rho = lam * projector(psi) + (1 - lam) * np.eye(N * N) / N**2
    for _ in range(10):
        P = random_hermitian(rng, N * N)
        want = lam * np.vdot(psi, P @ psi).real + (1 - lam) * np.trace(P).real / N**2
        assert trace_product(rho, P) == pytest.approx(want, abs=1e-12)


def test_canonical_phase_idempotent(rng):
    for _ in range(20):
        v = random_state(rng, 5)
        c = canonical_phase(v)
        assert np.array_equal(canonical_phase(c), c)
        assert c[0].imag == 0 and c[0].real >= 0
