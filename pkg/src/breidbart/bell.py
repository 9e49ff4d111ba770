"""Bell functional built from intermediate-state binary measurements.

Alice measures one of two bases (setting 0 or 1). Bob has N^2 binary
measurements, the projectors onto the intermediate states, grouped in N
sets. In set ``i`` the state carrying value ``v`` is ``m[v, v + i]``.
Joint events where Bob's value matches the one predicted from Alice's
outcome count +1, all others -1.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError
from .linalg import is_density_matrix, is_projector, trace_product
from .mub import _check_dim, fourier_basis, intermediate_family, success_probability, total_error

SETTINGS = ("A", "A'")


@dataclass(frozen=True)
class ValueTable:
    """Assignment of the N^2 intermediate states to sets and values."""

    dim: int

    def member(self, i: int, v: int) -> tuple[int, int]:
        """Index pair (n, k) of the state with value ``v`` in set ``i``."""
        return v, (v + i) % self.dim

    def locate(self, n: int, k: int) -> tuple[int, int]:
        """(set, value) of ``m[n, k]``."""
        return (k - n) % self.dim, n

    def sets(self) -> list[list[tuple[tuple[int, int], int]]]:
        return [[(self.member(i, v), v) for v in range(self.dim)] for i in range(self.dim)]


@dataclass(frozen=True)
class CorrelationMap:
    """Affine rule ``v_B = eps * v_A + delta (mod N)`` per (setting, set)."""

    dim: int
    eps: np.ndarray  # (2, N) entries +-1
    delta: np.ndarray  # (2, N) entries 0..N-1

    @classmethod
    def paper_default(cls, N: int) -> "CorrelationMap":
        """Offsets 0 for the first basis and N - i for the second, no sign flip."""
        N = _check_dim(N)
        eps = np.ones((2, N), dtype=int)
        delta = np.zeros((2, N), dtype=int)
        delta[1] = (N - np.arange(N)) % N
        return cls(N, eps, delta)

    def target(self, X: int, i: int, v_A: int) -> int:
        return int((self.eps[X, i] * v_A + self.delta[X, i]) % self.dim)

    def targets(self) -> np.ndarray:
        """Array ``t[X, v_A, i]`` of Bob's correlated value."""
        N = self.dim
        v = np.arange(N)
        return (self.eps[:, None, :] * v[None, :, None] + self.delta[:, None, :]) % N


@dataclass(frozen=True)
class MeasurementConfig:
    """Alice's two bases and Bob's grouped measurement vectors.

    ``alice[X][:, a]`` is Alice's state for setting X, outcome a.
    ``bob[i, v]`` is the vector Bob tests in set ``i`` for value ``v``.
    """

    dim: int
    alice: np.ndarray  # (2, N, N)
    bob: np.ndarray  # (N, N, N)

    @classmethod
    def standard(cls, N: int) -> "MeasurementConfig":
        N = _check_dim(N)
        pair = fourier_basis(N)
        states = intermediate_family(N).states
        table = ValueTable(N)
        bob = np.empty((N, N, N), dtype=complex)
        for i in range(N):
            for v in range(N):
                bob[i, v] = states[table.member(i, v)]
        return cls(N, np.stack([pair.basis_a, pair.basis_a_prime]), bob)


@dataclass(frozen=True)
class BellFunctional:
    dim: int
    coefficients: np.ndarray  # (2, N, N, N) indexed [X, v_A, i, v_B]
    lhv_bound: float = 2.0
    quantum_max: float = field(default=float("nan"))

    @classmethod
    def from_map(cls, cmap: CorrelationMap) -> "BellFunctional":
        N = cmap.dim
        t = cmap.targets()  # (2, N, N)
        c = -np.ones((2, N, N, N))
        X, a, i = np.meshgrid(range(2), range(N), range(N), indexing="ij")
        c[X, a, i, t] = 1.0
        return cls(N, c, 2.0, 2 * np.sqrt(N))


def max_entangled(N: int) -> np.ndarray:
    """(1/sqrt N) sum_i |a_i a_i>."""
    N = _check_dim(N)
    return np.eye(N, dtype=complex).reshape(N * N) / np.sqrt(N)


def pure(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def rho_mix(lam: float, N: int) -> np.ndarray:
    """Maximally entangled state with weight ``lam``, white noise otherwise."""
    return lam * pure(max_entangled(N)) + (1 - lam) * np.eye(N * N) / N**2


def rho_sep(N: int) -> np.ndarray:
    """(1/N) sum_i |a_i a_i><a_i a_i|."""
    N = _check_dim(N)
    d = np.zeros(N * N)
    d[np.arange(N) * (N + 1)] = 1.0 / N
    return np.diag(d).astype(complex)


def rho_cs(lam: float, N: int) -> np.ndarray:
    """Maximally entangled state mixed with the closest separable state."""
    return lam * pure(max_entangled(N)) + (1 - lam) * rho_sep(N)


def joint_prob(rho: np.ndarray, P_A: np.ndarray, Q_B: np.ndarray) -> float:
    """Tr(rho (P_A ⊗ Q_B)) for projectors on each side."""
    P_A = np.asarray(P_A, dtype=complex)
    Q_B = np.asarray(Q_B, dtype=complex)
    if not is_projector(P_A) or not is_projector(Q_B):
        raise DomainError("joint_prob needs projectors on both sides")
    if not is_density_matrix(rho):
        raise DomainError("rho is not a density matrix")
    return trace_product(rho, np.kron(P_A, Q_B))


def joint_table(rho: np.ndarray, config: MeasurementConfig) -> np.ndarray:
    """All joint probabilities ``p[X, v_A, i, v_B]``."""
    N = config.dim
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (N * N, N * N):
        raise DomainError(f"rho has shape {rho.shape}, expected {(N * N, N * N)}")
    r = rho.reshape(N, N, N, N)
    A = config.alice
    # Bob's unnormalized conditional state for each Alice outcome
    cond = np.einsum("xra,rstu,xta->xasu", A.conj(), r, A)
    B = config.bob
    p = np.einsum("ivs,xasu,ivu->xaiv", B.conj(), cond, B)
    return p.real


def bell_value(rho: np.ndarray, functional: BellFunctional, config: MeasurementConfig) -> float:
    if functional.dim != config.dim:
        raise DomainError("functional and measurement configuration differ in dimension")
    return float(np.sum(functional.coefficients * joint_table(rho, config)))


def block_probabilities(rho, cmap: CorrelationMap, config: MeasurementConfig) -> tuple[np.ndarray, np.ndarray]:
    """Correlated and uncorrelated probability per (setting, set).

    Both arrays have shape (2, N). Entry [X, i] of the first is P(M_i = X)
    in the shifted sense of ``cmap``; the second sums every other value.
    """
    p = joint_table(rho, config)
    N = config.dim
    t = cmap.targets()
    X, a, i = np.meshgrid(range(2), range(N), range(N), indexing="ij")
    hit = p[X, a, i, t].sum(axis=1)
    total = p.sum(axis=(1, 3))
    return hit, total - hit


@dataclass(frozen=True)
class Calibration:
    map: CorrelationMap
    block_probability: np.ndarray  # (2, N)


def calibrate_correlation_maps(N: int, config: MeasurementConfig | None = None, rho=None) -> Calibration:
    """Pick, per (setting, set), the affine rule maximizing the correlated probability.

    All 2N rules ``(eps, delta)`` are scored on ``rho`` (default: the
    maximally entangled state). Ties go to ``eps=+1`` then the smaller
    ``delta``.
    """
    N = _check_dim(N)
    config = config or MeasurementConfig.standard(N)
    rho = pure(max_entangled(N)) if rho is None else rho
    p = joint_table(rho, config)
    v = np.arange(N)
    eps = np.empty((2, N), dtype=int)
    delta = np.empty((2, N), dtype=int)
    best = np.full((2, N), -np.inf)
    for X in range(2):
        for i in range(N):
            for e in (1, -1):
                for d in range(N):
                    score = p[X, v, i, (e * v + d) % N].sum()
                    if score > best[X, i] + 1e-12:
                        best[X, i], eps[X, i], delta[X, i] = score, e, d
    return Calibration(CorrelationMap(N, eps, delta), best)


def standard_functional(N: int) -> tuple[BellFunctional, MeasurementConfig]:
    """Calibrated functional with the standard measurements."""
    config = MeasurementConfig.standard(N)
    cal = calibrate_correlation_maps(N, config)
    return BellFunctional.from_map(cal.map), config


def quantum_value(N: int) -> float:
    functional, config = standard_functional(N)
    return bell_value(pure(max_entangled(N)), functional, config)


def _pair_gains(functional: BellFunctional) -> np.ndarray:
    """g[alpha, alpha', proj] = c_A + c_A' for every projector."""
    N = functional.dim
    c = functional.coefficients.reshape(2, N, N * N)
    return c[0][:, None, :] + c[1][None, :, :]


def lhv_max(functional: BellFunctional, method: str = "fast") -> float:
    """Maximum of the functional over deterministic local strategies.

    A strategy fixes Alice's outcome for both settings and a 0/1 answer for
    each of Bob's N^2 binary measurements. ``"fast"`` maximizes each
    projector independently given Alice's pair, which is exact because every
    projector enters once per setting. ``"enumerate"`` checks all
    N^2 * 2^(N^2) strategies and is limited to N <= 4.
    """
    g = _pair_gains(functional)
    if method == "fast":
        return float(np.clip(g, 0, None).sum(axis=2).max())
    if method == "enumerate":
        N = functional.dim
        if N > 4:
            raise DomainError("full enumeration is limited to N <= 4")
        bits = ((np.arange(2 ** (N * N))[:, None] >> np.arange(N * N)) & 1).astype(float)
        return float(max((bits @ g[a, b]).max() for a in range(N) for b in range(N)))
    raise DomainError(f"unknown method {method!r}")


def n_strategies(N: int) -> int:
    return N * N * 2 ** (N * N)


def weyl_operator(j: int, k: int, N: int) -> np.ndarray:
    """X^j Z^k with X|a_n> = |a_{n+1}> and Z|a_n> = omega^n |a_n>."""
    X = np.roll(np.eye(N), 1, axis=0)
    Z = np.diag(np.exp(2j * np.pi * np.arange(N) / N))
    return np.linalg.matrix_power(X, j) @ np.linalg.matrix_power(Z, k)


def depolarizing_weights(F_B: float, N: int) -> np.ndarray:
    """Weyl weights of the basis-symmetric channel that is uniform off the identity."""
    D_B = 1.0 - F_B
    w = np.full((N, N), D_B / (N * (N - 1)))
    w[0, 0] = F_B - D_B / N
    return w


def bob_channel(rho: np.ndarray, N: int, weights: np.ndarray) -> np.ndarray:
    """Apply the Weyl channel with ``weights[j, k]`` to Bob's half of ``rho``."""
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (N, N) or weights.min() < -1e-12 or abs(weights.sum() - 1) > 1e-9:
        raise DomainError("Weyl weights must be an N x N probability table")
    out = np.zeros_like(rho, dtype=complex)
    for j in range(N):
        for k in range(N):
            if weights[j, k] == 0:
                continue
            K = np.kron(np.eye(N), weyl_operator(j, k, N))
            out += weights[j, k] * K @ rho @ K.conj().T
    return out


def _check_disturbance(D_B: float, N: int) -> None:
    if not (-1e-12 <= D_B <= 1.0 - 1.0 / N + 1e-12):
        raise DomainError(f"disturbance {D_B} outside [0, 1 - 1/N] for N={N}")


def disturbance_bell(D_B: float, N: int) -> float:
    """Closed-form Bell value when Bob's half passes a channel of disturbance ``D_B``."""
    N = _check_dim(N)
    _check_disturbance(D_B, N)
    F, D = success_probability(N), total_error(N)
    F_B = 1.0 - D_B
    return float(2 * N * (F_B * (F - D) - F * D_B - (N - 3) / (N - 1) * D * D_B))


def disturbance_bell_numeric(D_B: float, N: int, weights: np.ndarray | None = None) -> float:
    """Bell value of the maximally entangled state after Bob's noisy channel.

    ``weights`` defaults to :func:`depolarizing_weights`; any Weyl channel
    with fidelity ``1 - D_B`` in both bases gives the same value.
    """
    N = _check_dim(N)
    _check_disturbance(D_B, N)
    if weights is None:
        weights = depolarizing_weights(1.0 - D_B, N)
    rho = bob_channel(pure(max_entangled(N)), N, weights)
    functional, config = standard_functional(N)
    return bell_value(rho, functional, config)


def critical_disturbance(N: int) -> float:
    """Disturbance at which the Bell value drops to the local bound 2."""
    N = _check_dim(N)
    r = np.sqrt(N)
    return float((N * r - r - N + 1) / (N * r + N * N - 2 * N))


def lambda_mix(N: int) -> float:
    """Smallest white-noise visibility that still violates the inequality."""
    N = _check_dim(N)
    return float((N - 1) / (N + np.sqrt(N) - 2))


def lambda_sep(N: int) -> float:
    """Same threshold for noise given by the closest separable state."""
    N = _check_dim(N)
    r = np.sqrt(N)
    return float((N - r) / (N + r - 2))


def detection_ratio(eta: float, N: int) -> float:
    """Bell value with detector efficiency ``eta`` (post-selected ratio form).

    Missing Bob clicks score zero; missing Alice clicks are replaced by a
    random outcome, which gives the white-noise value.
    """
    N = _check_dim(N)
    if not 0.0 < eta <= 1.0:
        raise DomainError(f"efficiency {eta} outside (0, 1]")
    num = eta**2 * 2 * np.sqrt(N) + eta * (1 - eta) * (0 + 2 * (2 - N))
    return float(num / (eta**2 + 2 * eta * (1 - eta)))


def detector_threshold(N: int) -> float:
    N = _check_dim(N)
    return float(N / (N + np.sqrt(N) - 1))

