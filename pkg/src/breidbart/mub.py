"""Computational/Fourier basis pair and the intermediate states between them.

Basis states are stored as matrix *columns*: ``pair.basis_a[:, n]`` is the
n-th computational state and ``pair.basis_a_prime[:, k]`` the k-th Fourier
state. Intermediate states ``m[n, k]`` always index the computational state
first.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import AmbiguousStateError, DomainError
from .linalg import PHASE_EPS, canonical_phase, eig_hermitian, normalize, projector


def _check_dim(N: int) -> int:
    if int(N) != N or N < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {N!r}")
    return int(N)


def _check_index(i: int, N: int, name: str) -> None:
    if not 0 <= i < N:
        raise DomainError(f"{name}={i} outside 0..{N - 1}")


def success_probability(N: int) -> float:
    """Overlap probability of an intermediate state with either parent, (1 + 1/sqrt N)/2."""
    return 0.5 * (1 + 1 / np.sqrt(N))


def total_error(N: int) -> float:
    """Probability mass on the N-1 wrong basis states, (1 - 1/sqrt N)/2."""
    return 0.5 * (1 - 1 / np.sqrt(N))


@dataclass(frozen=True)
class MubPair:
    dim: int
    basis_a: np.ndarray
    basis_a_prime: np.ndarray

    def overlaps(self) -> np.ndarray:
        """Matrix of <a_n|a'_k>."""
        return self.basis_a.conj().T @ self.basis_a_prime


@dataclass(frozen=True)
class IntermediateFamily:
    dim: int
    states: np.ndarray  # shape (N, N, N): states[n, k] is |m_nk>
    success_prob: float
    error_prob_per_state: float
    total_error: float


@lru_cache(maxsize=64)
def _fourier(N: int) -> MubPair:
    idx = np.arange(N)
    omega = np.exp(2j * np.pi / N)
    a = np.eye(N, dtype=complex)
    # column k is |a'_k> = N^-1/2 sum_n omega^{kn} |a_n>
    a_prime = omega ** np.outer(idx, idx) / np.sqrt(N)
    for M in (a, a_prime):
        M.setflags(write=False)
    return MubPair(N, a, a_prime)


def fourier_basis(N: int) -> MubPair:
    return _fourier(_check_dim(N))


def _intermediate(n: int, k: int, N: int) -> np.ndarray:
    pair = _fourier(N)
    phase = np.exp(2j * np.pi * k * n / N)
    C = 2 * (1 + 1 / np.sqrt(N))
    return canonical_phase((phase * pair.basis_a[:, n] + pair.basis_a_prime[:, k]) / np.sqrt(C))


def intermediate_state(n: int, k: int, N: int) -> np.ndarray:
    """The state halfway between |a_n> and |a'_k>."""
    N = _check_dim(N)
    _check_index(n, N, "n")
    _check_index(k, N, "k")
    return _intermediate(n, k, N)


@lru_cache(maxsize=64)
def _family(N: int) -> IntermediateFamily:
    states = np.empty((N, N, N), dtype=complex)
    for n in range(N):
        for k in range(N):
            states[n, k] = _intermediate(n, k, N)
    states.setflags(write=False)
    D = total_error(N)
    return IntermediateFamily(N, states, success_probability(N), D / (N - 1), D)


def intermediate_family(N: int) -> IntermediateFamily:
    """All N^2 intermediate states together with their overlap probabilities."""
    return _family(_check_dim(N))


def intermediate_of_pair(alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """Intermediate state of two arbitrary non-orthogonal states.

    The square root of <beta|alpha> is taken as the conjugate of the
    principal root of <alpha|beta>. This keeps the relative phase between
    the two terms equal to the phase of the overlap, including when the
    overlap is a negative real number.
    """
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    if alpha.shape != beta.shape:
        raise DomainError("states have different dimensions")
    c = complex(np.vdot(alpha, beta))
    if abs(c) <= PHASE_EPS:
        raise DomainError("orthogonal states have no intermediate state")
    root = np.sqrt(c)
    m = root * alpha + np.conj(root) * beta
    m = m / (np.sqrt(2) * np.sqrt(abs(c) + abs(c) ** 2))
    # renormalize against rounding; the formula is already unit norm
    return normalize(m)


def intermediate_via_mixture(states, gap_tol: float = 1e-9) -> np.ndarray:
    """Top eigenvector of the equal-weight mixture of ``states``."""
    states = [np.asarray(s, dtype=complex) for s in states]
    if len(states) < 2:
        raise DomainError("need at least two states")
    rho = sum(projector(s) for s in states) / len(states)
    w, V = eig_hermitian(rho)
    if w[0] - w[1] <= gap_tol:
        raise AmbiguousStateError(
            f"top eigenvalue is degenerate (gap {w[0] - w[1]:.3e}); intermediate state is ambiguous"
        )
    return V[:, 0]


def m_overlap(k: int, l: int, n: int, m: int, N: int) -> complex:
    """Closed form of <m_kl|m_nm>."""
    N = _check_dim(N)
    for name, i in (("k", k), ("l", l), ("n", n), ("m", m)):
        _check_index(i, N, name)
    sq = np.sqrt(N)
    C = 2 * (1 + 1 / sq)
    e = lambda x: np.exp(2j * np.pi * x / N)  # noqa: E731
    total = (
        sq * (k == n) * e(m * n - l * k)
        + sq * (l == m)
        + e((m - l) * k)
        + e((m - l) * n)
    )
    return complex(total / (sq * C))


def povm_operator_sum(N: int) -> np.ndarray:
    fam = intermediate_family(N)
    vecs = fam.states.reshape(N * N, N)
    return vecs.T @ vecs.conj() / N


def povm_residual(N: int) -> float:
    """Max-norm distance of (1/N) sum |m_nk><m_nk| from the identity."""
    N = _check_dim(N)
    return float(np.max(np.abs(povm_operator_sum(N) - np.eye(N))))


def unbiasedness_residual(N: int) -> float:
    """Max deviation of |<a_n|a'_k>| from 1/sqrt N."""
    pair = fourier_basis(N)
    return float(np.max(np.abs(np.abs(pair.overlaps()) - 1 / np.sqrt(N))))
