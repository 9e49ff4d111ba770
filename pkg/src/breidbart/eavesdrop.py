"""Eavesdropping on the N-dimensional two-basis protocol.

Covers the intercept/resend attack with intermediate-state binary
measurements and the fidelity picture of the optimal (cloning) attack:
Shannon information per quNit, the point where Bob's and Eve's
information cross, and the decomposition of the crossing-point state
into intermediate states.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .exceptions import DomainError
from .mub import _check_dim, _check_index, intermediate_family, success_probability, fourier_basis

# trials per independently seeded batch; part of the reproducibility contract
BATCH_SIZE = 1 << 16


@dataclass(frozen=True)
class ChannelParams:
    dim: int
    fidelity_bob: float
    fidelity_eve: float

    @property
    def disturbance_bob(self) -> float:
        return 1.0 - self.fidelity_bob

    @property
    def disturbance_eve(self) -> float:
        return 1.0 - self.fidelity_eve


@dataclass(frozen=True)
class InfoPoint:
    fidelity: float
    info_bits: float


def _xlog2(p: float) -> float:
    return 0.0 if p <= 0 else p * np.log2(p)


def shannon_info(F: float, N: int, tol: float = 1e-12) -> float:
    """Bits per quNit for a symmetric channel with fidelity ``F``.

    The N-1 wrong outcomes share ``1 - F`` equally.
    """
    N = _check_dim(N)
    if not (1.0 / N - tol <= F <= 1.0 + tol):
        raise DomainError(f"fidelity {F} outside [1/N, 1] for N={N}")
    F = min(max(F, 1.0 / N), 1.0)
    wrong = (1.0 - F) / (N - 1)
    info = np.log2(N) + _xlog2(F) + (N - 1) * _xlog2(wrong)
    # rounding can leave a few ulps outside the physical range
    return float(min(max(info, 0.0), np.log2(N)))


def intercept_resend_info(N: int) -> float:
    """Eve's information on conclusive rounds of the intermediate-state attack."""
    return shannon_info(success_probability(N), N)


def crossing_fidelity(N: int) -> tuple[float, float]:
    """(F, D) at which Bob's and Eve's information curves cross."""
    N = _check_dim(N)
    s = 1 / (2 * np.sqrt(N))
    return 0.5 + s, 0.5 - s


def rho_disturbed(n: int, F_B: float, N: int) -> np.ndarray:
    """Bob's state when |a_n> was sent through a channel of fidelity ``F_B``."""
    N = _check_dim(N)
    _check_index(n, N, "n")
    if not 0.0 <= F_B <= 1.0:
        raise DomainError(f"fidelity {F_B} outside [0, 1]")
    if F_B < 1.0 / N:
        warnings.warn(f"fidelity {F_B} is below the random-guess value 1/{N}", stacklevel=2)
    diag = np.full(N, (1.0 - F_B) / (N - 1))
    diag[n] = F_B
    return np.diag(diag).astype(complex)


def crossing_decomposition_residual(n: int, N: int) -> float:
    """Distance between (1/N) sum_j |m_nj><m_nj| and the crossing-point state."""
    N = _check_dim(N)
    _check_index(n, N, "n")
    row = intermediate_family(N).states[n]  # (N, N): row[j] = |m_nj>
    mix = row.T @ row.conj() / N
    F, _ = crossing_fidelity(N)
    return float(np.max(np.abs(mix - rho_disturbed(n, F, N))))


def _cloner_amplitudes(F_B: float, N: int, x: float, sign: float) -> tuple[float, float, float]:
    v = np.sqrt(max(F_B - (N - 1) * x * x, 0.0))
    y = sign * np.sqrt(max(1.0 - F_B - (N - 1) * x * x, 0.0)) / (N - 1)
    return v, x, y


def _eve_fidelity(v: float, x: float, y: float, N: int) -> float:
    # Eve's Weyl amplitudes are the symplectic Fourier transform of Bob's
    b00 = (v + 2 * (N - 1) * x + (N - 1) ** 2 * y) / N
    b0n = (v + (N - 2) * x - (N - 1) * y) / N
    return b00 * b00 + (N - 1) * b0n * b0n


def optimal_cloner_amplitudes(F_B: float, N: int, grid: int = 401) -> tuple[float, float, float]:
    """Weyl amplitudes (v, x, y) of the best two-basis cloner at Bob fidelity ``F_B``.

    Bob's channel applies X^j Z^k with probability v^2 for j = k = 0, x^2
    when exactly one of j, k is zero and y^2 otherwise. Fixing Bob's
    fidelity leaves one free amplitude; it is scanned on a grid and refined
    to maximize Eve's fidelity.
    """
    N = _check_dim(N)
    if not (1.0 / N - 1e-12 <= F_B <= 1.0 + 1e-12):
        raise DomainError(f"fidelity {F_B} outside [1/N, 1] for N={N}")
    F_B = min(max(F_B, 1.0 / N), 1.0)
    x_max = np.sqrt(min(F_B, 1.0 - F_B) / (N - 1))
    if x_max == 0.0:
        return _cloner_amplitudes(F_B, N, 0.0, 1.0)
    best, best_amp = -np.inf, None
    xs = np.linspace(0.0, x_max, grid)
    for sign in (1.0, -1.0):
        score = lambda x: _eve_fidelity(*_cloner_amplitudes(F_B, N, x, sign), N)  # noqa: E731
        vals = [score(x) for x in xs]
        i = int(np.argmax(vals))
        lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)]
        res = minimize_scalar(lambda x: -score(x), bounds=(lo, hi), method="bounded", options={"xatol": 1e-14})
        for x, val in ((xs[i], vals[i]), (res.x, -res.fun)):
            if val > best:
                best, best_amp = val, _cloner_amplitudes(F_B, N, x, sign)
    return best_amp


def cloner_weights(F_B: float, N: int) -> np.ndarray:
    """Weyl probability table of Bob's channel under the optimal cloner."""
    v, x, y = optimal_cloner_amplitudes(F_B, N)
    w = np.full((N, N), y * y)
    w[0, :] = w[:, 0] = x * x
    w[0, 0] = v * v
    return w


def optimal_eve_fidelity(F_B: float, N: int) -> float:
    """Largest fidelity Eve can keep when Bob's fidelity is ``F_B``."""
    return float(min(_eve_fidelity(*optimal_cloner_amplitudes(F_B, N), N), 1.0))


def information_curves(N: int, points: int = 21) -> list[dict]:
    """Bob's and Eve's information along the optimal-attack tradeoff.

    Rows are sampled on an even grid of Bob's disturbance from 0 to 1 - 1/N.
    """
    N = _check_dim(N)
    rows = []
    for D_B in np.linspace(0.0, 1.0 - 1.0 / N, points):
        F_B = 1.0 - D_B
        F_E = optimal_eve_fidelity(F_B, N)
        rows.append(
            {
                "disturbance_bob": float(D_B),
                "fidelity_bob": float(F_B),
                "fidelity_eve": F_E,
                "info_bob": shannon_info(F_B, N),
                "info_eve": shannon_info(F_E, N),
            }
        )
    return rows


@dataclass(frozen=True)
class IRStats:
    dim: int
    trials: int
    seed: int
    conclusive: int
    eve_correct: int
    bob_errors: int

    @property
    def conclusive_fraction(self) -> float:
        return self.conclusive / self.trials

    @property
    def eve_success(self) -> float:
        return self.eve_correct / self.conclusive if self.conclusive else float("nan")

    @property
    def eve_info(self) -> float:
        """Plug-in Eve information from the empirical success frequency."""
        if not self.conclusive:
            return float("nan")
        F = self.eve_success
        # below 1/N the symmetric-channel form is undefined; clamp
        return shannon_info(max(F, 1.0 / self.dim), self.dim)

    @property
    def bob_error_rate(self) -> float:
        return self.bob_errors / self.conclusive if self.conclusive else float("nan")

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "trials": self.trials,
            "seed": self.seed,
            "conclusive_fraction": self.conclusive_fraction,
            "eve_success": self.eve_success,
            "eve_info": self.eve_info,
            "bob_error_rate": self.bob_error_rate,
        }


def _ir_tables(N: int):
    pair = fourier_basis(N)
    bases = np.stack([pair.basis_a, pair.basis_a_prime])  # (2, N, N) columns are states
    m = intermediate_family(N).states.reshape(N * N, N)
    # p_click[X, j, kl] = |<m_kl|x_j>|^2
    p_click = np.abs(np.einsum("rc,xcj->xjr", m.conj(), bases)) ** 2
    # Bob measuring basis X on the resent |m_kl>: cumulative outcome table
    p_bob = np.transpose(p_click, (0, 2, 1))  # (X, kl, u)
    cdf = np.cumsum(p_bob, axis=2)
    cdf[..., -1] = 1.0
    return p_click, cdf


def _ir_batch(N: int, n: int, seed_seq: np.random.SeedSequence, tables) -> tuple[int, int, int]:
    p_click, cdf = tables
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    basis = rng.integers(0, 2, size=n)
    sent = rng.integers(0, N, size=n)
    k = rng.integers(0, N, size=n)
    l = rng.integers(0, N, size=n)
    u_click = rng.random(n)
    u_bob = rng.random(n)
    kl = k * N + l
    click = u_click < p_click[basis, sent, kl]
    guess = np.where(basis == 0, k, l)
    eve_ok = click & (guess == sent)
    bob_out = (u_bob[:, None] > cdf[basis, kl]).sum(axis=1)
    bob_err = click & (bob_out != sent)
    return int(click.sum()), int(eve_ok.sum()), int(bob_err.sum())


def simulate_intercept_resend(N: int, trials: int, seed: int, workers: int = 1) -> IRStats:
    """Monte Carlo of intercept/resend with intermediate-state binary measurements.

    Each round Alice sends one of the 2N basis states uniformly, Eve tests a
    uniformly chosen projector |m_kl><m_kl|. On a click she guesses ``k``
    (basis A) or ``l`` (basis A') once the basis is announced and resends
    |m_kl>; otherwise nothing reaches Bob. Bob measures in Alice's basis.

    Trials are split into batches of ``BATCH_SIZE`` with child seeds spawned
    from ``seed``, so results do not depend on ``workers``.
    """
    N = _check_dim(N)
    if int(trials) != trials or trials < 1:
        raise DomainError(f"trials must be a positive integer, got {trials!r}")
    trials = int(trials)
    sizes = [BATCH_SIZE] * (trials // BATCH_SIZE)
    if trials % BATCH_SIZE:
        sizes.append(trials % BATCH_SIZE)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    tables = _ir_tables(N)
    jobs = list(zip(sizes, children))
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda job: _ir_batch(N, job[0], job[1], tables), jobs))
    else:
        parts = [_ir_batch(N, size, ss, tables) for size, ss in jobs]
    c, e, b = (sum(p[i] for p in parts) for i in range(3))
    return IRStats(N, trials, int(seed), c, e, b)
