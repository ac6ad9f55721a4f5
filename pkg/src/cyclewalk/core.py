"""Canonical operators, coin states and the partial trace.

Joint walker/coin states use the ordering walker (x) coin with the coin index
running fastest, i.e. the joint index of ``|n> (x) |c>`` is ``2 * n + c``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

STRUCT_TOL = 1e-12
STATE_TOL = 1e-9

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = (SIGMA_X + SIGMA_Z) / np.sqrt(2)

PAULI_BASIS = (IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z)
PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


class InvalidStateError(ValueError):
    """A matrix failed the density-matrix checks."""


def _check_axis(axis: str) -> str:
    if axis not in PAULI:
        raise ValueError(f"axis must be one of x, y, z (got {axis!r})")
    return axis


def dft_matrix(N: int) -> np.ndarray:
    """Unitary DFT with entry ``(n, k) = exp(2 pi i n k / N) / sqrt(N)``.

    Column ``k`` is the momentum eigenstate ``|k>`` written in the position basis.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    n = np.arange(N)
    return np.exp(2j * np.pi * np.outer(n, n) / N) / np.sqrt(N)


def shift_operators(N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (U, R, V) in the position basis.

    U|n> = |n+1>, R|n> = |-n>, and V|k> = |k+1> in the momentum basis,
    which makes V = diag(exp(2 pi i n / N)) in position space.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    n = np.arange(N)
    U = np.zeros((N, N), dtype=complex)
    U[(n + 1) % N, n] = 1.0
    R = np.zeros((N, N), dtype=complex)
    R[(-n) % N, n] = 1.0
    V = np.diag(np.exp(2j * np.pi * n / N))
    return U, R, V


def kick_unitary(axis: str, eps: float) -> np.ndarray:
    """exp(-i eps sigma_axis) = cos(eps) I - i sin(eps) sigma_axis."""
    _check_axis(axis)
    if not np.isfinite(eps):
        raise ValueError("kick angle must be finite")
    return np.cos(eps) * IDENTITY2 - 1j * np.sin(eps) * PAULI[axis]


@dataclass(frozen=True)
class BlochCoin:
    p_x: float
    p_y: float
    p_z: float

    def __post_init__(self):
        norm2 = self.p_x**2 + self.p_y**2 + self.p_z**2
        if not np.isfinite(norm2) or norm2 > 1 + STATE_TOL:
            raise ValueError(f"Bloch vector norm exceeds 1: {np.sqrt(norm2):.6g}")

    @classmethod
    def from_density(cls, rho: np.ndarray) -> "BlochCoin":
        rho = np.asarray(rho)
        comps = [float(np.real(np.trace(rho @ s))) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)]
        return cls(*comps)

    def as_array(self) -> np.ndarray:
        return np.array([self.p_x, self.p_y, self.p_z])


# (|0> + i|1>)/sqrt(2)
UNBIASED_COIN = BlochCoin(0.0, 1.0, 0.0)


def coin_density(b: BlochCoin) -> np.ndarray:
    """(I + p . sigma) / 2."""
    return 0.5 * (IDENTITY2 + b.p_x * SIGMA_X + b.p_y * SIGMA_Y + b.p_z * SIGMA_Z)


def partial_trace_coin(rho: np.ndarray) -> np.ndarray:
    """Trace out the coin from a (2N x 2N) walker (x) coin operator."""
    rho = np.asarray(rho)
    d = rho.shape[0]
    if rho.shape != (d, d) or d % 2:
        raise ValueError("joint operator must be square with even dimension")
    N = d // 2
    return np.einsum("icjc->ij", rho.reshape(N, 2, N, 2))


def check_density(rho: np.ndarray, tol: float = STATE_TOL) -> np.ndarray:
    """Raise InvalidStateError unless ``rho`` is Hermitian, unit trace and PSD."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError("density matrix must be square")
    if not np.all(np.isfinite(rho)):
        raise InvalidStateError("density matrix has non-finite entries")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise InvalidStateError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise InvalidStateError(f"trace is {np.trace(rho).real:.12g}, expected 1")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -tol:
        raise InvalidStateError("density matrix has negative eigenvalues")
    return rho


def matrix_power(a: np.ndarray, t: int) -> np.ndarray:
    """Binary exponentiation over the last two axes; works on stacks of matrices."""
    if t < 0:
        raise ValueError("power must be nonnegative")
    a = np.asarray(a)
    result = np.broadcast_to(np.eye(a.shape[-1], dtype=a.dtype), a.shape).copy()
    base = a.copy()
    while t:
        if t & 1:
            result = result @ base
        t >>= 1
        if t:
            base = base @ base
    return result
