"""Discrete Wigner function on the doubled 2N x 2N phase-space grid.

The point operators are A(q, p) = U^q R V^(-p) exp(i pi p q / N). Grid values are
stored as ``values[q, p]`` and scaled by 1/(2N) so that summing a vertical line
q = 2n gives the position probability <n|rho|n> directly (twice the 1/N convention).
"""
from __future__ import annotations

from dataclasses import dataclass
import numpy as np
import scipy.linalg

from cyclewalk.core import matrix_power, shift_operators

IMAG_TOL = 1e-10


def phase_point_operator(q: int, p: int, N: int) -> np.ndarray:
    if not (0 <= q < 2 * N and 0 <= p < 2 * N):
        raise ValueError(f"(q, p) = ({q}, {p}) outside the {2 * N} x {2 * N} grid")
    U, R, V = shift_operators(N)
    return (matrix_power(U, q) @ R @ matrix_power(V.conj(), p)) * np.exp(1j * np.pi * p * q / N)


def displacement_operator(b: int, a: int, N: int) -> np.ndarray:
    """D(b, a) = U^b V^a exp(i pi a b / N); negative powers allowed."""
    U, _, V = shift_operators(N)
    Ub = matrix_power(U if b >= 0 else U.conj().T, abs(b))
    Va = matrix_power(V if a >= 0 else V.conj().T, abs(a))
    return Ub @ Va * np.exp(1j * np.pi * a * b / N)


@dataclass(frozen=True, eq=False)
class WignerGrid:
    N: int
    values: np.ndarray
    norm_constant: float

    def __post_init__(self):
        if self.values.shape != (2 * self.N, 2 * self.N):
            raise ValueError("grid must be 2N x 2N")

    def __add__(self, other: "WignerGrid") -> "WignerGrid":
        if other.N != self.N or other.norm_constant != self.norm_constant:
            raise ValueError("grids are not compatible")
        return WignerGrid(self.N, self.values + other.values, self.norm_constant)

    def position_marginal(self) -> np.ndarray:
        return self.values.sum(axis=1)[::2]

    def momentum_marginal(self) -> np.ndarray:
        return self.values.sum(axis=0)[::2]


def _traces(rho: np.ndarray) -> np.ndarray:
    """Tr[rho A(q, p)] on the full grid.

    A(q, p) maps |n> to |q - n> with phase exp(i pi p (q - 2n) / N), so the trace
    collects rho[n, q - n] along an anti-diagonal and Fourier-sums it over n.
    """
    N = rho.shape[0]
    q = np.arange(2 * N)
    n = np.arange(N)
    p = np.arange(2 * N)
    G = rho[n[None, :], (q[:, None] - n[None, :]) % N]
    E = np.exp(-2j * np.pi * np.outer(n, p) / N)
    return (G @ E) * np.exp(1j * np.pi * np.outer(q, p) / N)


def wigner_function(rho: np.ndarray) -> WignerGrid:
    rho = np.asarray(rho, dtype=complex)
    N = rho.shape[0]
    norm = 1.0 / (2 * N)
    vals = norm * _traces(rho)
    resid = np.abs(vals.imag).max()
    if resid > IMAG_TOL * max(1.0, np.abs(vals.real).max()):
        raise ValueError(f"Wigner values have imaginary residue {resid:.3g}; input not Hermitian?")
    return WignerGrid(N, vals.real.copy(), norm)


def reconstruct_density(W: WignerGrid) -> np.ndarray:
    """Rebuild rho from the q, p < N quadrant: rho = sum W(q, p) A(q, p) / (N * norm)."""
    if not (np.isfinite(W.norm_constant) and W.norm_constant > 0):
        raise ValueError("inconsistent norm_constant")
    N = W.N
    coeff = W.values[:N, :N] / (N * W.norm_constant)
    q = np.arange(N)
    n = np.arange(N)
    phase = np.exp(1j * np.pi * np.outer(q, q) / N)  # (q, p)
    E = np.exp(-2j * np.pi * np.outer(q, n) / N)     # (p, n)
    S = (coeff * phase) @ E                          # S[q, n]
    rho = np.empty((N, N), dtype=complex)
    rho[(q[:, None] - n[None, :]) % N, n[None, :]] = S
    return rho


@dataclass(frozen=True)
class LineSpec:
    """Points (q, p) with a q - b p = c (mod 2N)."""

    a: int
    b: int
    c: int

    @classmethod
    def vertical(cls, q: int) -> "LineSpec":
        return cls(1, 0, q)

    @classmethod
    def horizontal(cls, p: int) -> "LineSpec":
        return cls(0, -1, p)

    def mask(self, N: int) -> np.ndarray:
        q, p = np.meshgrid(np.arange(2 * N), np.arange(2 * N), indexing="ij")
        return (self.a * q - self.b * p - self.c) % (2 * N) == 0


def line_sum(W: WignerGrid, line: LineSpec) -> float:
    mask = line.mask(W.N)
    if not mask.any():
        raise ValueError(f"line {line} has no grid points for N={W.N}")
    return float(W.values[mask].sum())


def eigenvalue_probability(rho: np.ndarray, b: int, a: int, eigenvalue: complex, tol: float = 1e-8) -> float:
    """Probability of measuring ``eigenvalue`` for D(b, a), via explicit diagonalisation."""
    N = rho.shape[0]
    D = displacement_operator(b, a, N)
    T, Z = scipy.linalg.schur(D, output="complex")
    lam = np.diag(T)
    sel = np.abs(lam - eigenvalue) < tol
    if not sel.any():
        return 0.0
    Zs = Z[:, sel]
    return float(np.real(np.trace(Zs.conj().T @ rho @ Zs)))


def line_eigenvalue(line: LineSpec, N: int) -> complex:
    """Eigenvalue of D(b, a) whose probability the line sum gives: exp(i pi c / N)."""
    return complex(np.exp(1j * np.pi * line.c / N))
