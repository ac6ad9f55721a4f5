import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cyclewalk.core import HADAMARD, UNBIASED_COIN, coin_density, dft_matrix, matrix_power
from cyclewalk.observables import parity_support_check, position_distribution
from cyclewalk.verify import random_coin, random_density
from cyclewalk.walk import (
    MomentumDecomposition,
    WalkState,
    classical_walk,
    coin_eigensystem,
    evolve_direct,
    evolve_exact,
    f_coeff,
    f_matrix,
    localized_state,
    m_k,
    mixture_state,
    momentum_state,
    superposition_state,
    walk_step,
)


def ket(N, n, c):
    v = np.zeros(2 * N, dtype=complex)
    v[2 * n + c] = 1
    return v


def test_walk_step_by_hand():
    N, n0 = 9, 4
    out = walk_step(N) @ ket(N, n0, 0)
    # H|0> = (|0> + |1>)/sqrt2, then |0> steps right and |1> steps left
    expected = (ket(N, n0 + 1, 0) + ket(N, n0 - 1, 1)) / np.sqrt(2)
    assert np.abs(out - expected).max() < 1e-15


@pytest.mark.parametrize("N", [2, 5, 12])
def test_walk_step_unitary(N):
    W = walk_step(N)
    assert np.abs(W @ W.conj().T - np.eye(2 * N)).max() < 1e-12


@pytest.mark.parametrize("N", [3, 8, 11])
def test_walk_step_block_diagonal_in_momentum(N):
    T = np.kron(dft_matrix(N), np.eye(2))
    B = (T.conj().T @ walk_step(N) @ T).reshape(N, 2, N, 2)
    for k in range(N):
        for kp in range(N):
            target = m_k(k, N) if k == kp else np.zeros((2, 2))
            assert np.abs(B[k, :, kp, :] - target).max() < 1e-12


def test_m_k_examples():
    assert np.allclose(m_k(0, 7), HADAMARD)
    for k in range(7):
        M = m_k(k, 7)
        assert np.abs(M @ M.conj().T - np.eye(2)).max() < 1e-12
        assert np.allclose(np.abs(np.linalg.eigvals(M)), 1)
    with pytest.raises(ValueError):
        m_k(7, 7)


@pytest.mark.parametrize("N", [4, 9, 40])
def test_coin_eigensystem(N):
    es = coin_eigensystem(N)
    for k in range(N):
        M = m_k(k, N)
        for l in range(2):
            v = es.eigenvectors[k, :, l]
            assert abs(np.linalg.norm(v) - 1) < 1e-12
            assert np.abs(M @ v - es.eigenvalues[k, l] * v).max() < 1e-10


def test_f_coeff_trivial_cases(rng):
    rho2 = random_coin(rng)
    assert f_coeff(3, 3, 17, rho2, 11) == pytest.approx(1, abs=1e-12)
    assert f_coeff(2, 5, 0, rho2, 11) == pytest.approx(1, abs=1e-12)


def test_f_coeff_spectral_vs_matrix_powers(rng):
    for _ in range(30):
        N = int(rng.integers(2, 40))
        k, kp = (int(x) for x in rng.integers(0, N, 2))
        t = int(rng.integers(0, 51))
        rho2 = random_coin(rng)
        a, b = matrix_power(m_k(k, N), t), matrix_power(m_k(kp, N), t)
        direct = np.trace(a @ rho2 @ b.conj().T)
        assert abs(f_coeff(k, kp, t, rho2, N) - direct) < 1e-10
        assert abs(f_matrix(N, t, rho2)[k, kp] - direct) < 1e-10
        assert abs(f_coeff(k, kp, t, rho2, N)) <= 1 + 1e-12


def test_evolve_exact_t0(rng):
    st_ = WalkState(random_density(6, rng), random_coin(rng))
    assert np.allclose(evolve_exact(st_, 0), st_.walker)


def test_evolve_exact_matches_direct_iteration():
    st_ = WalkState(localized_state(8, 3), coin_density(UNBIASED_COIN))
    assert np.abs(evolve_exact(st_, 10) - evolve_direct(st_, 10)).max() < 1e-10


@settings(deadline=None, max_examples=25)
@given(st.integers(2, 32), st.integers(0, 40), st.integers(0, 2**32 - 1))
def test_engine_equivalence_property(N, t, seed):
    rng = np.random.default_rng(seed)
    st_ = WalkState(random_density(N, rng), random_coin(rng))
    a = evolve_exact(st_, t)
    assert np.abs(a - evolve_direct(st_, t)).max() < 1e-10
    assert np.abs(a - a.conj().T).max() < 1e-10
    assert abs(np.trace(a) - 1) < 1e-10


@settings(deadline=None, max_examples=25)
@given(st.integers(5, 41), st.integers(0, 40), st.data())
def test_parity_support_unitary(N, t, data):
    n0 = data.draw(st.integers(0, N - 1))
    st_ = WalkState(localized_state(N, n0), coin_density(UNBIASED_COIN))
    p = position_distribution(evolve_exact(st_, t))
    # parity only survives while the walker has not wrapped around the cycle
    if n0 - t >= 0 and n0 + t < N:
        ok, worst = parity_support_check(p, n0, t)
        assert ok, worst


def test_momentum_decomposition_round_trip(rng):
    rho = random_density(7, rng)
    dec = MomentumDecomposition.from_walker(rho)
    assert np.allclose(dec.c, dec.c.conj().T)
    assert abs(np.trace(dec.c) - 1) < 1e-12
    assert np.abs(dec.to_position() - rho).max() < 1e-12


def test_initial_state_constructors():
    N = 9
    assert np.trace(superposition_state(N, 2, 5) @ superposition_state(N, 2, 5)).real == pytest.approx(1)
    mix = mixture_state(N, 2, 5)
    assert np.trace(mix @ mix).real == pytest.approx(0.5)
    mom = momentum_state(N, 3)
    assert np.allclose(np.diag(mom).real, 1 / N)
    with pytest.raises(ValueError):
        superposition_state(N, 2, 2)
    with pytest.raises(ValueError):
        localized_state(N, N)


def test_classical_walk_examples():
    N, n0 = 21, 10
    p1 = classical_walk(n0, 1, N)
    assert p1[n0 - 1] == p1[n0 + 1] == 0.5
    p2 = classical_walk(n0, 2, N)
    assert (p2[n0 - 2], p2[n0], p2[n0 + 2]) == (0.25, 0.5, 0.25)
    for t in range(0, 11):  # no wrap-around yet
        p = classical_walk(n0, t, N)
        assert p.sum() == pytest.approx(1)
        assert parity_support_check(p, n0, t)[0]


def test_fig2_profile():
    st_ = WalkState(localized_state(301, 150), coin_density(UNBIASED_COIN))
    p = position_distribution(evolve_exact(st_, 100))
    assert abs(int(np.argmax(p[:150])) - (150 - 71)) <= 4
    assert abs(150 + int(np.argmax(p[150:])) - (150 + 71)) <= 4
    sites = np.arange(130, 171)
    plateau = p[sites[(sites + 250) % 2 == 0]].mean()
    assert plateau == pytest.approx(1 / (np.sqrt(2) * 100), rel=0.3)
