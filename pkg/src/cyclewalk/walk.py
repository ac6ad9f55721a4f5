"""Closed-system walk: one-step unitary, momentum-space propagation, classical baseline."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from cyclewalk.core import (
    HADAMARD,
    SIGMA_Z,
    STATE_TOL,
    check_density,
    dft_matrix,
    matrix_power,
    partial_trace_coin,
    shift_operators,
)

DEGENERACY_TOL = 1e-8


def _check_N(N: int) -> None:
    if N < 2:
        raise ValueError("N must be >= 2")


def _check_t(t: int) -> int:
    if int(t) != t or t < 0:
        raise ValueError(f"step count must be a nonnegative integer (got {t!r})")
    return int(t)


# -- initial walker states ------------------------------------------------------------

def localized_state(N: int, n0: int) -> np.ndarray:
    _check_site(N, n0)
    rho = np.zeros((N, N), dtype=complex)
    rho[n0, n0] = 1.0
    return rho


def superposition_state(N: int, n1: int, n2: int) -> np.ndarray:
    """(|n1> + |n2>)/sqrt(2)."""
    _check_site(N, n1)
    _check_site(N, n2)
    if n1 == n2:
        raise ValueError("superposition needs two distinct sites")
    psi = np.zeros(N, dtype=complex)
    psi[[n1, n2]] = 1 / np.sqrt(2)
    return np.outer(psi, psi.conj())


def mixture_state(N: int, n1: int, n2: int) -> np.ndarray:
    """Equal-weight mixture of |n1> and |n2>."""
    return 0.5 * (localized_state(N, n1) + localized_state(N, n2))


def momentum_state(N: int, k: int) -> np.ndarray:
    if not 0 <= k < N:
        raise ValueError(f"momentum index {k} outside [0, {N})")
    phi = dft_matrix(N)[:, k]
    return np.outer(phi, phi.conj())


def _check_site(N: int, n: int) -> None:
    _check_N(N)
    if not 0 <= n < N:
        raise ValueError(f"site {n} outside [0, {N})")


# -- state containers -------------------------------------------------------------------

@dataclass(frozen=True)
class MomentumDecomposition:
    """c[k, k'] = <k| rho_w |k'>."""

    c: np.ndarray

    @property
    def N(self) -> int:
        return self.c.shape[0]

    @classmethod
    def from_walker(cls, rho_w: np.ndarray) -> "MomentumDecomposition":
        F = dft_matrix(rho_w.shape[0])
        return cls(F.conj().T @ rho_w @ F)

    def to_position(self, coeff: np.ndarray | None = None) -> np.ndarray:
        """Position-basis matrix of sum c[k,k'] coeff[k,k'] |k><k'|."""
        F = dft_matrix(self.N)
        c = self.c if coeff is None else self.c * coeff
        return F @ c @ F.conj().T


@dataclass(frozen=True, eq=False)
class WalkState:
    """Product initial state rho_w (x) rho_coin."""

    walker: np.ndarray
    coin0: np.ndarray

    def __post_init__(self):
        _check_N(self.walker.shape[0])
        check_density(self.walker)
        check_density(self.coin0)
        if self.coin0.shape != (2, 2):
            raise ValueError("coin state must be 2 x 2")

    @property
    def N(self) -> int:
        return self.walker.shape[0]

    @cached_property
    def decomposition(self) -> MomentumDecomposition:
        return MomentumDecomposition.from_walker(self.walker)

    def joint(self) -> np.ndarray:
        return np.kron(self.walker, self.coin0)


# -- unitary dynamics -------------------------------------------------------------------

def walk_step(N: int) -> np.ndarray:
    """U^{sigma_z} (I (x) H) on walker (x) coin."""
    _check_N(N)
    U, _, _ = shift_operators(N)
    P0 = np.diag([1.0, 0.0]).astype(complex)
    P1 = np.diag([0.0, 1.0]).astype(complex)
    shift = np.kron(U, P0) + np.kron(U.conj().T, P1)
    return shift @ np.kron(np.eye(N), HADAMARD)


def _m_k_stack(ks: np.ndarray, N: int) -> np.ndarray:
    theta = 2 * np.pi * np.asarray(ks) / N
    phases = np.stack([np.exp(-1j * theta), np.exp(1j * theta)], axis=-1)
    return phases[..., :, None] * HADAMARD


def m_k(k: int, N: int) -> np.ndarray:
    """exp(-2 pi i k sigma_z / N) H, the walk restricted to momentum k."""
    _check_N(N)
    if not 0 <= k < N:
        raise ValueError(f"momentum index {k} outside [0, {N})")
    return _m_k_stack(np.array(k), N)


@dataclass(frozen=True)
class CoinEigenSystem:
    """Eigenpairs of every M_k: ``eigenvalues[k, l]`` and ``eigenvectors[k, :, l]``."""

    N: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def degenerate(self) -> np.ndarray:
        return np.abs(self.eigenvalues[:, 0] - self.eigenvalues[:, 1]) < DEGENERACY_TOL

    def power(self, t: int) -> np.ndarray:
        """Stack of M_k^t for all k."""
        vecs = self.eigenvectors
        out = (vecs * self.eigenvalues[:, None, :] ** t) @ vecs.conj().transpose(0, 2, 1)
        bad = self.degenerate
        if bad.any():
            out[bad] = matrix_power(_m_k_stack(np.flatnonzero(bad), self.N), t)
        return out


def coin_eigensystem(N: int) -> CoinEigenSystem:
    _check_N(N)
    vals, vecs = np.linalg.eig(_m_k_stack(np.arange(N), N))
    vecs = vecs / np.linalg.norm(vecs, axis=1, keepdims=True)
    return CoinEigenSystem(N, vals, vecs)


def f_coeff(k: int, kp: int, t: int, coin0: np.ndarray, N: int) -> complex:
    """Tr[M_k^t rho_coin (M_k'^t)^dagger] from the eigen-expansion of M_k and M_k'."""
    t = _check_t(t)
    for idx in (k, kp):
        if not 0 <= idx < N:
            raise ValueError(f"momentum index {idx} outside [0, {N})")
    es = coin_eigensystem(N)
    if es.degenerate[k] or es.degenerate[kp]:
        a, b = matrix_power(m_k(k, N), t), matrix_power(m_k(kp, N), t)
        return complex(np.trace(a @ coin0 @ b.conj().T))
    lam, phi = es.eigenvalues[k], es.eigenvectors[k]
    mu, chi = es.eigenvalues[kp], es.eigenvectors[kp]
    total = 0j
    for l in range(2):
        for m in range(2):
            weight = (lam[l] * np.conj(mu[m])) ** t
            total += weight * (phi[:, l].conj() @ coin0 @ chi[:, m]) * (chi[:, m].conj() @ phi[:, l])
    return complex(total)


def f_matrix(N: int, t: int, coin0: np.ndarray) -> np.ndarray:
    """f(k, k', t) for the full momentum grid."""
    t = _check_t(t)
    Mt = coin_eigensystem(N).power(t)
    return np.einsum("kab,bc,lac->kl", Mt, coin0, Mt.conj(), optimize=True)


def evolve_exact(state: WalkState, t: int) -> np.ndarray:
    """Walker density matrix after t noiseless steps (position basis)."""
    t = _check_t(t)
    if t == 0:
        return state.walker.copy()
    f = f_matrix(state.N, t, state.coin0)
    return state.decomposition.to_position(f)


def evolve_direct(state: WalkState, t: int) -> np.ndarray:
    """Reference engine: iterate the 2N x 2N joint unitary, then trace out the coin."""
    t = _check_t(t)
    W = matrix_power(walk_step(state.N), t)
    return partial_trace_coin(W @ state.joint() @ W.conj().T)


def classical_walk(n0: int, t: int, N: int) -> np.ndarray:
    """Unbiased +-1 random walk on the N-cycle started at n0."""
    _check_site(N, n0)
    t = _check_t(t)
    p = np.zeros(N)
    p[n0] = 1.0
    for _ in range(t):
        p = 0.5 * (np.roll(p, 1) + np.roll(p, -1))
    return p
