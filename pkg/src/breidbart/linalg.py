"""Small dense complex linear algebra.

Everything here works on plain numpy arrays. Dimensions are tiny (a few
dozen at most) so we favour clarity and explicit checks over speed.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

from .exceptions import DomainError

FLAG_TOL = 1e-10
ALGEBRA_TOL = 1e-9
PHASE_EPS = 1e-12


def is_hermitian(M: np.ndarray, tol: float = FLAG_TOL) -> bool:
    M = np.asarray(M)
    return M.ndim == 2 and M.shape[0] == M.shape[1] and np.max(np.abs(M - M.conj().T)) <= tol


def is_unitary(U: np.ndarray, tol: float = FLAG_TOL) -> bool:
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    return np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) <= tol


def is_projector(P: np.ndarray, tol: float = ALGEBRA_TOL) -> bool:
    P = np.asarray(P)
    return is_hermitian(P, tol) and np.max(np.abs(P @ P - P)) <= tol


def canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first non-negligible amplitude is real and >= 0."""
    v = np.asarray(v, dtype=complex)
    nz = np.flatnonzero(np.abs(v) > PHASE_EPS)
    if nz.size == 0:
        return v.copy()
    lead = v[nz[0]]
    if lead.imag == 0 and lead.real > 0:
        return v.copy()
    out = v * np.conj(lead / np.abs(lead))
    out[nz[0]] = np.abs(lead)
    return out


def normalize(v: np.ndarray) -> np.ndarray:
    """Unit-normalize and canonicalize the global phase."""
    v = np.asarray(v, dtype=complex)
    norm = np.linalg.norm(v)
    if norm <= PHASE_EPS:
        raise DomainError("cannot normalize a zero vector")
    return canonical_phase(v / norm)


def same_ray(u: np.ndarray, v: np.ndarray, tol: float = FLAG_TOL) -> bool:
    """True when ``u`` and ``v`` are equal up to a global phase."""
    return np.max(np.abs(canonical_phase(u) - canonical_phase(v))) <= tol


def projector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def tensor(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Kronecker product with the ``(u ⊗ v)[i*N + j] = u[i] v[j]`` layout."""
    u = np.asarray(u, dtype=complex).ravel()
    v = np.asarray(v, dtype=complex).ravel()
    if u.size == 0 or v.size == 0:
        raise DomainError("tensor factors must be non-empty")
    return np.kron(u, v)


def eig_hermitian(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues in descending
    order and eigenvectors as the *columns* of the second array, each with
    canonical global phase.
    """
    M = np.asarray(M, dtype=complex)
    if not is_hermitian(M):
        raise DomainError("matrix is not Hermitian")
    # average with the adjoint so eigh sees an exactly Hermitian input
    w, V = np.linalg.eigh((M + M.conj().T) / 2)
    order = np.argsort(w)[::-1]
    w, V = w[order], V[:, order]
    V = np.column_stack([canonical_phase(V[:, i]) for i in range(V.shape[1])])
    return w, V


def principal_unitary_sqrt(U: np.ndarray) -> np.ndarray:
    """Square root of a unitary on the principal branch.

    Eigenphases are taken in (-pi, pi] and halved, so ``-1`` maps to ``+i``.
    A complex Schur form of a normal matrix is diagonal, which gives an
    orthonormal eigenbasis even for degenerate eigenvalues.
    """
    U = np.asarray(U, dtype=complex)
    if not is_unitary(U):
        raise DomainError("matrix is not unitary")
    T, Z = scipy.linalg.schur(U, output="complex")
    theta = np.angle(np.diag(T))
    theta = np.where(theta <= -np.pi + PHASE_EPS, np.pi, theta)
    return Z @ np.diag(np.exp(0.5j * theta)) @ Z.conj().T


def trace_product(rho: np.ndarray, P: np.ndarray) -> float:
    """Real part of Tr(rho P)."""
    rho = np.asarray(rho)
    P = np.asarray(P)
    if rho.shape != P.shape or rho.ndim != 2:
        raise DomainError(f"shape mismatch: {rho.shape} vs {P.shape}")
    # Tr(AB) = sum_ij A_ij B_ji
    return float(np.real(np.sum(rho * P.T)))


def partial_trace(rho: np.ndarray, dims: tuple[int, int], keep: int) -> np.ndarray:
    """Reduced state of a bipartite density matrix; ``keep`` is 0 or 1."""
    dA, dB = dims
    r = np.asarray(rho).reshape(dA, dB, dA, dB)
    if keep == 0:
        return np.einsum("ijkj->ik", r)
    return np.einsum("ijil->jl", r)


def is_density_matrix(rho: np.ndarray, tol: float = ALGEBRA_TOL) -> bool:
    rho = np.asarray(rho)
    if not is_hermitian(rho, tol):
        return False
    if abs(np.trace(rho) - 1) > tol:
        return False
    return np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() >= -tol
