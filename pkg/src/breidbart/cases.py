"""Two qutrit variants of the inequality.

``real_basis_case3`` replaces the Fourier basis by a real rotated basis.
``basis_variant_case3`` forces Bob's three sets to be orthonormal bases
built from square roots of basis-changing unitaries, and also evaluates
the twelve-term inequality that keeps only half of the error terms.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .bell import (
    BellFunctional,
    MeasurementConfig,
    block_probabilities,
    bell_value,
    calibrate_correlation_maps,
    joint_table,
    max_entangled,
    pure,
)
from .exceptions import DomainError
from .linalg import is_unitary, principal_unitary_sqrt
from .mub import fourier_basis, intermediate_of_pair


class CaseCheckError(AssertionError):
    """A reproduced number disagrees with its expected value."""


@dataclass
class CaseReport:
    name: str
    correlated: np.ndarray  # (2, N) block probabilities
    uncorrelated: np.ndarray  # (2, N)
    bell_value: float
    expected: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def rows(self) -> list[dict]:
        out = []
        N = self.correlated.shape[1]
        for X in range(2):
            for i in range(N):
                out.append(
                    {
                        "case": self.name,
                        "quantity": f"block_X{X}_set{i}",
                        "value": float(self.correlated[X, i]),
                        "error": float(self.uncorrelated[X, i]),
                    }
                )
        out.append({"case": self.name, "quantity": "bell_value", "value": self.bell_value, "error": 0.0})
        for key, val in self.extra.items():
            out.append({"case": self.name, "quantity": key, "value": float(val), "error": 0.0})
        return out

    def verify(self, tol: float = 1e-9) -> None:
        """Raise :class:`CaseCheckError` if any expected value is missed."""
        got = {
            "correlated": self.correlated,
            "uncorrelated": self.uncorrelated,
            "bell_value": self.bell_value,
            **self.extra,
        }
        for key, want in self.expected.items():
            if np.max(np.abs(np.asarray(got[key]) - np.asarray(want))) > tol:
                raise CaseCheckError(f"{self.name}: {key} = {got[key]!r}, expected {want!r}")


def rotation_111(angle: float = np.pi / 3) -> np.ndarray:
    """Rotation of R^3 by ``angle`` about the (1, 1, 1) axis."""
    u = np.ones(3) / np.sqrt(3)
    K = np.array([[0, -u[2], u[1]], [u[2], 0, -u[0]], [-u[1], u[0], 0]])
    return np.cos(angle) * np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * np.outer(u, u)


def _report(name, config, expected, extra_fn=None) -> CaseReport:
    N = config.dim
    rho = pure(max_entangled(N))
    cal = calibrate_correlation_maps(N, config, rho)
    functional = BellFunctional.from_map(cal.map)
    hit, miss = block_probabilities(rho, cal.map, config)
    extra = extra_fn(rho, cal.map, config) if extra_fn else {}
    return CaseReport(name, hit, miss, bell_value(rho, functional, config), expected, extra)


def real_basis_config() -> MeasurementConfig:
    N = 3
    A = np.eye(N, dtype=complex)
    Ar = rotation_111().astype(complex)  # columns are the real second basis
    bob = np.empty((N, N, N), dtype=complex)
    for i in range(N):
        for v in range(N):
            bob[i, v] = intermediate_of_pair(A[:, v], Ar[:, (v + i) % N])
    return MeasurementConfig(N, np.stack([A, Ar]), bob)


def real_basis_case3() -> CaseReport:
    expected = {
        "correlated": [[5 / 6, 4 / 6, 5 / 6], [5 / 6, 4 / 6, 5 / 6]],
        "uncorrelated": [[1 / 6, 2 / 6, 1 / 6], [1 / 6, 2 / 6, 1 / 6]],
        "bell_value": 10 / 3,
    }
    return _report("real_basis", real_basis_config(), expected)


def intermediate_basis(source: np.ndarray, target: np.ndarray, phase_steps: int = 12) -> np.ndarray:
    """Orthonormal basis halfway between two bases via a unitary square root.

    ``U`` maps ``source[:, j]`` to ``target[:, j]`` up to a phase per column.
    Those phases are free, and the principal square root depends on them,
    so they are searched over the ``phase_steps``-th roots of unity and the
    choice maximizing the mean of |<s_j|sqrt(U)|s_j>|^2 is kept. Returns
    ``sqrt(U) @ source`` (columns are the new basis vectors).
    """
    if not (is_unitary(source) and is_unitary(target)):
        raise DomainError("bases must be orthonormal")
    N = source.shape[0]
    roots = np.exp(2j * np.pi * np.arange(phase_steps) / phase_steps)
    best, best_R = -np.inf, None
    for phases in itertools.product(roots, repeat=N):
        U = target @ np.diag(phases) @ source.conj().T
        R = principal_unitary_sqrt(U)
        score = np.mean(np.abs(np.einsum("cj,cd,dj->j", source.conj(), R, source)) ** 2)
        if score > best + 1e-12:
            best, best_R = score, R
    return best_R @ source


def basis_variant_config(phase_steps: int = 12) -> MeasurementConfig:
    N = 3
    pair = fourier_basis(N)
    A, Ap = pair.basis_a, pair.basis_a_prime
    bob = np.empty((N, N, N), dtype=complex)
    for i in range(N):
        shifted = Ap[:, (np.arange(N) + i) % N]  # column j is |a'_{j+i}>
        M = intermediate_basis(A, shifted, phase_steps)
        for v in range(N):
            bob[i, v] = M[:, v]
    return MeasurementConfig(N, np.stack([A, Ap]), bob)


# Error offsets of the twelve-term inequality, relative to Bob's correlated value
S12_ERROR_SHIFT = (1, 2)


def s12_coefficients(cmap) -> np.ndarray:
    N = cmap.dim
    t = cmap.targets()
    c = np.zeros((2, N, N, N))
    X, a, i = np.meshgrid(range(2), range(N), range(N), indexing="ij")
    c[X, a, i, t] = 1.0
    shift = np.array(S12_ERROR_SHIFT)[:, None, None]
    c[X, a, i, (t + shift) % N] = -1.0
    return c


def s12_lhv_max(cmap) -> float:
    """Exhaustive local maximum of the twelve-term inequality.

    Bob measures bases, so a strategy is Alice's outcome per setting plus
    one outcome per basis: 9 * 27 strategies for qutrits.
    """
    N = cmap.dim
    c = s12_coefficients(cmap)
    best = -np.inf
    for a0, a1 in itertools.product(range(N), repeat=2):
        for b in itertools.product(range(N), repeat=N):
            val = sum(c[0, a0, i, b[i]] + c[1, a1, i, b[i]] for i in range(N))
            best = max(best, val)
    return float(best)


def basis_lhv_max(cmap) -> float:
    """Local maximum of the full functional when Bob measures bases."""
    N = cmap.dim
    c = BellFunctional.from_map(cmap).coefficients
    best = -np.inf
    for a0, a1 in itertools.product(range(N), repeat=2):
        for b in itertools.product(range(N), repeat=N):
            best = max(best, sum(c[0, a0, i, b[i]] + c[1, a1, i, b[i]] for i in range(N)))
    return float(best)


def _basis_extras(rho, cmap, config) -> dict:
    p = joint_table(rho, config)
    return {
        "s12_quantum": float(np.sum(s12_coefficients(cmap) * p)),
        "s12_lhv_max": s12_lhv_max(cmap),
        "basis_lhv_max": basis_lhv_max(cmap),
    }


def basis_variant_case3(phase_steps: int = 12) -> CaseReport:
    expected = {
        "correlated": np.full((2, 3), 7 / 9),
        "uncorrelated": np.full((2, 3), 2 / 9),
        "bell_value": 10 / 3,
        "s12_quantum": 4.0,
        "s12_lhv_max": 3.0,
        "basis_lhv_max": 2.0,
    }
    return _report("basis_variant", basis_variant_config(phase_steps), expected, _basis_extras)
