import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cyclewalk.core import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    BlochCoin,
    InvalidStateError,
    UNBIASED_COIN,
    check_density,
    coin_density,
    dft_matrix,
    kick_unitary,
    matrix_power,
    partial_trace_coin,
    shift_operators,
)


def test_dft_single_point():
    assert np.allclose(dft_matrix(1), [[1]])


def test_dft_entry():
    assert dft_matrix(4)[1, 2] == pytest.approx(-0.5, abs=1e-15)


@pytest.mark.parametrize("N", [1, 2, 3, 7, 16, 41, 64])
def test_dft_unitary(N):
    F = dft_matrix(N)
    assert np.abs(F @ F.conj().T - np.eye(N)).max() < 1e-12


def test_dft_rejects_zero():
    with pytest.raises(ValueError):
        dft_matrix(0)


def test_shift_actions():
    N = 7
    U, R, V = shift_operators(N)
    e = np.eye(N)
    assert np.allclose(U @ e[0], e[1])
    assert np.allclose(R @ e[1], e[N - 1])


@pytest.mark.parametrize("N", [2, 5, 8, 13])
def test_V_position_phases_from_momentum_action(N):
    # V|k> = |k+1> in the momentum basis; conjugate back to position space.
    F = dft_matrix(N)
    V_mom = np.roll(np.eye(N), 1, axis=0)
    V_pos = F @ V_mom @ F.conj().T
    _, _, V = shift_operators(N)
    assert np.abs(V_pos - V).max() < 1e-12
    assert np.allclose(np.diag(V), np.exp(2j * np.pi * np.arange(N) / N))


@pytest.mark.parametrize("N", [2, 3, 6, 11, 32])
def test_U_diagonal_in_momentum(N):
    U, R, V = shift_operators(N)
    F = dft_matrix(N)
    D = F.conj().T @ U @ F
    off = D - np.diag(np.diag(D))
    assert np.abs(off).max() < 1e-12
    assert np.abs(np.diag(D) - np.exp(-2j * np.pi * np.arange(N) / N)).max() < 1e-12
    assert np.abs(U @ R @ U - R).max() < 1e-12
    assert np.abs(matrix_power(U, N) - np.eye(N)).max() < 1e-12
    assert np.abs(matrix_power(V, N) - np.eye(N)).max() < 1e-12


def test_shift_rejects_small_N():
    with pytest.raises(ValueError):
        shift_operators(1)


def test_kick_examples():
    assert np.allclose(kick_unitary("x", 0.0), np.eye(2))
    assert np.abs(kick_unitary("y", np.pi / 2) - (-1j * SIGMA_Y)).max() < 1e-15
    with pytest.raises(ValueError):
        kick_unitary("w", 0.1)
    with pytest.raises(ValueError):
        kick_unitary("x", np.nan)


@settings(deadline=None, max_examples=50)
@given(st.sampled_from("xyz"), st.floats(-10, 10))
def test_kick_unitary_and_inverse(axis, eps):
    K = kick_unitary(axis, eps)
    assert np.abs(K @ K.conj().T - np.eye(2)).max() < 1e-12
    assert np.abs(K @ kick_unitary(axis, -eps) - np.eye(2)).max() < 1e-12


def test_coin_density_examples():
    assert np.allclose(coin_density(BlochCoin(0, 0, 1)), [[1, 0], [0, 0]])
    mixed = coin_density(BlochCoin(0, 0, 0))
    assert np.allclose(mixed, np.eye(2) / 2)
    assert np.trace(mixed @ mixed).real == pytest.approx(0.5)


def test_unbiased_coin_bloch_vector():
    psi = np.array([1, 1j]) / np.sqrt(2)
    rho = np.outer(psi, psi.conj())
    comps = [np.trace(rho @ s).real for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)]
    assert np.allclose(comps, [0, 1, 0], atol=1e-15)
    assert np.allclose(coin_density(UNBIASED_COIN), rho)
    assert BlochCoin.from_density(rho) == BlochCoin(*comps)


def test_coin_rejects_long_bloch_vector():
    with pytest.raises(ValueError):
        BlochCoin(1, 1, 0)


def test_partial_trace_product(make_density, rng):
    rw = make_density(5, rng)
    rc = make_density(2, rng)
    assert np.abs(partial_trace_coin(np.kron(rw, rc)) - rw).max() < 1e-14


def test_partial_trace_bell_state():
    psi = np.zeros(4, dtype=complex)
    psi[[0, 3]] = 1 / np.sqrt(2)  # (|0>|0> + |1>|1>)/sqrt(2)
    assert np.allclose(partial_trace_coin(np.outer(psi, psi.conj())), np.eye(2) / 2)


def test_partial_trace_linear_and_trace_preserving(make_density, rng):
    a, b = make_density(12, rng), make_density(12, rng)
    x, y = 0.3, 0.7
    lhs = partial_trace_coin(x * a + y * b)
    assert np.abs(lhs - x * partial_trace_coin(a) - y * partial_trace_coin(b)).max() < 1e-14
    assert abs(np.trace(partial_trace_coin(a)) - 1) < 1e-12


def test_partial_trace_rejects_odd():
    with pytest.raises(ValueError):
        partial_trace_coin(np.eye(3))


def test_check_density():
    check_density(np.eye(3) / 3)
    with pytest.raises(InvalidStateError):
        check_density(np.eye(3))
    with pytest.raises(InvalidStateError):
        check_density(np.diag([1.5, -0.5]))
    with pytest.raises(InvalidStateError):
        check_density(np.array([[0.5, 0.1], [0.2, 0.5]]))


def test_matrix_power_matches_numpy(rng):
    A = rng.normal(size=(3, 4, 4)) / 2
    for t in (0, 1, 5, 13):
        assert np.allclose(matrix_power(A, t), np.linalg.matrix_power(A, t))
