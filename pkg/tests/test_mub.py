import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from breidbart.exceptions import AmbiguousStateError, DomainError
from breidbart.linalg import same_ray
from breidbart.mub import (
    fourier_basis,
    intermediate_family,
    intermediate_of_pair,
    intermediate_state,
    intermediate_via_mixture,
    m_overlap,
    povm_residual,
)

from conftest import random_state


def test_fourier_n2():
    pair = fourier_basis(2)
    s = 1 / np.sqrt(2)
    assert np.allclose(pair.basis_a_prime[:, 0], [s, s])
    assert np.allclose(pair.basis_a_prime[:, 1], [s, -s])


def test_fourier_n3_overlap():
    pair = fourier_basis(3)
    assert abs(pair.overlaps()[1, 1] - np.exp(2j * np.pi / 3) / np.sqrt(3)) <= 1e-12


@pytest.mark.parametrize("N", [2, 3, 5, 8, 16])
def test_fourier_unbiased(N):
    pair = fourier_basis(N)
    for M in (pair.basis_a, pair.basis_a_prime):
        assert np.max(np.abs(M.conj().T @ M - np.eye(N))) <= 1e-10
    # direct inner products, one pair at a time
    for n in range(N):
        for k in range(N):
            ov = np.vdot(pair.basis_a[:, n], pair.basis_a_prime[:, k])
            assert abs(abs(ov) - 1 / np.sqrt(N)) <= 1e-10
            assert abs(ov - np.exp(2j * np.pi * k * n / N) / np.sqrt(N)) <= 1e-10


@pytest.mark.parametrize("N", [0, 1, 2.5])
def test_fourier_rejects_small(N):
    with pytest.raises(DomainError):
        fourier_basis(N)


def test_breidbart_qubit():
    m = intermediate_state(0, 0, 2)
    assert same_ray(m, [np.cos(np.pi / 8), np.sin(np.pi / 8)])
    assert abs(m[0]) ** 2 == pytest.approx(np.cos(np.pi / 8) ** 2, abs=1e-12)
    assert np.cos(np.pi / 8) ** 2 == pytest.approx((1 + 1 / np.sqrt(2)) / 2)


def test_qutrit_probabilities():
    for n, k in itertools.product(range(3), repeat=2):
        m = intermediate_state(n, k, 3)
        assert abs(m[n]) ** 2 == pytest.approx(0.788675, abs=1e-6)
    assert abs(intermediate_state(0, 0, 3)[2]) ** 2 == pytest.approx(0.105662, abs=1e-6)


def test_index_range():
    with pytest.raises(DomainError):
        intermediate_state(3, 0, 3)


@pytest.mark.parametrize("N", range(2, 17))
def test_conditional_probabilities(N):
    fam = intermediate_family(N)
    pair = fourier_basis(N)
    F = (1 + 1 / np.sqrt(N)) / 2
    D = (1 - 1 / np.sqrt(N)) / 2
    assert fam.success_prob + (N - 1) * fam.error_prob_per_state == pytest.approx(1, abs=1e-12)
    pa = np.abs(fam.states.conj() @ pair.basis_a) ** 2  # [n, k, q]
    pb = np.abs(fam.states.conj() @ pair.basis_a_prime) ** 2
    for n, k in itertools.product(range(N), repeat=2):
        for q in range(N):
            assert pa[n, k, q] == pytest.approx(F if q == n else D / (N - 1), abs=1e-10)
            assert pb[n, k, q] == pytest.approx(F if q == k else D / (N - 1), abs=1e-10)


def test_pair_returns_same_state(rng):
    a = random_state(rng, 4)
    assert same_ray(intermediate_of_pair(a, a), a)


@pytest.mark.parametrize("N", range(2, 17))
def test_pair_matches_closed_form(N):
    pair = fourier_basis(N)
    for n, k in itertools.product(range(N), repeat=2):
        m = intermediate_of_pair(pair.basis_a[:, n], pair.basis_a_prime[:, k])
        assert same_ray(m, intermediate_state(n, k, N))


def test_pair_equal_overlaps(rng):
    for _ in range(100):
        dim = rng.integers(2, 7)
        a, b = random_state(rng, dim), random_state(rng, dim)
        m = intermediate_of_pair(a, b)
        assert abs(np.vdot(m, a)) == pytest.approx(abs(np.vdot(m, b)), abs=1e-10)
        # cos of half the angle
        c = abs(np.vdot(a, b))
        assert abs(np.vdot(m, a)) ** 2 == pytest.approx((1 + c) / 2, abs=1e-10)


def test_pair_negative_real_overlap():
    a = np.array([1.0, 0.0])
    b = np.array([-0.5, np.sqrt(3) / 2])
    m = intermediate_of_pair(a, b)
    assert abs(np.vdot(m, a)) ** 2 == pytest.approx(0.75)
    assert abs(np.vdot(m, b)) ** 2 == pytest.approx(0.75)


def test_pair_rejects_orthogonal():
    with pytest.raises(DomainError):
        intermediate_of_pair([1, 0], [0, 1])


def test_mixture_of_copies(rng):
    a = random_state(rng, 3)
    assert same_ray(intermediate_via_mixture([a, a]), a)


@pytest.mark.parametrize("N", [2, 3, 4, 7])
def test_mixture_matches_closed_form(N):
    pair = fourier_basis(N)
    for n, k in itertools.product(range(N), repeat=2):
        m = intermediate_via_mixture([pair.basis_a[:, n], pair.basis_a_prime[:, k]])
        assert same_ray(m, intermediate_state(n, k, N), 1e-9)


def test_mixture_top_eigenvalue_qubit():
    pair = fourier_basis(2)
    a, b = pair.basis_a[:, 0], pair.basis_a_prime[:, 0]
    m = intermediate_via_mixture([a, b])
    rho = (np.outer(a, a.conj()) + np.outer(b, b.conj())) / 2
    assert np.vdot(m, rho @ m).real == pytest.approx((1 + 1 / np.sqrt(2)) / 2, abs=1e-12)


def test_mixture_ambiguous():
    with pytest.raises(AmbiguousStateError):
        intermediate_via_mixture([[1, 0, 0], [0, 1, 0]])
    with pytest.raises(DomainError):
        intermediate_via_mixture([[1, 0]])


@pytest.mark.parametrize("N", range(2, 9))
def test_overlap_closed_form(N):
    states = intermediate_family(N).states
    for k, l, n, m in itertools.product(range(N), repeat=4):
        direct = np.vdot(intermediate_state(k, l, N), intermediate_state(n, m, N))
        # canonical phases differ from the bare formula by the phase of each state
        bare_kl = states[k, l] * np.conj(_bare_phase(k, l, N))
        bare_nm = states[n, m] * np.conj(_bare_phase(n, m, N))
        assert abs(np.vdot(bare_kl, bare_nm) - m_overlap(k, l, n, m, N)) <= 1e-10
        assert abs(abs(direct) - abs(m_overlap(k, l, n, m, N))) <= 1e-10


def _bare_phase(n, k, N):
    """Phase that canonicalization removed from the unnormalized definition."""
    C = 2 * (1 + 1 / np.sqrt(N))
    bare = np.exp(2j * np.pi * k * n / N) * np.eye(N)[n] + np.exp(2j * np.pi * k * np.arange(N) / N) / np.sqrt(N)
    bare = bare / np.sqrt(C)
    lead = bare[np.flatnonzero(np.abs(bare) > 1e-12)[0]]
    return np.conj(lead / abs(lead))


def test_overlap_examples():
    assert m_overlap(1, 2, 1, 2, 5) == pytest.approx(1)
    assert abs(m_overlap(0, 0, 1, 1, 2)) <= 1e-12
    assert abs(m_overlap(0, 0, 1, 1, 3)) > 0.1


@pytest.mark.parametrize("N", [2, 3, 7])
def test_povm_examples(N):
    assert povm_residual(N) <= 1e-10


@settings(max_examples=15, deadline=None)
@given(N=st.integers(2, 16))
def test_povm_property(N):
    # independent summation, one outer product at a time
    S = np.zeros((N, N), complex)
    for n, k in itertools.product(range(N), repeat=2):
        m = intermediate_state(n, k, N)
        S += np.outer(m, m.conj()) / N
    assert np.max(np.abs(S - np.eye(N))) <= 1e-9
    assert povm_residual(N) <= 1e-9
