"""Observables computed from a walker density matrix."""
from __future__ import annotations

import logging

import numpy as np

from cyclewalk.core import dft_matrix

log = logging.getLogger(__name__)

PARITY_TOL = 1e-10


def position_distribution(rho_w: np.ndarray) -> np.ndarray:
    p = np.real(np.diag(rho_w)).copy()
    p[(p < 0) & (p > -1e-12)] = 0.0
    drift = abs(p.sum() - 1)
    if drift > 1e-9:
        log.warning("position distribution renormalised (drift %.3g)", drift)
        p /= p.sum()
    return p


def momentum_distribution(rho_w: np.ndarray) -> np.ndarray:
    F = dft_matrix(rho_w.shape[0])
    return position_distribution(F.conj().T @ rho_w @ F)


def linear_entropy(rho: np.ndarray, eps: float = 1e-12) -> float:
    """-ln Tr(rho^2), purity clamped to [1/d - eps, 1 + eps] and the result to >= 0."""
    d = rho.shape[0]
    purity = float(np.sum(np.abs(rho) ** 2))
    purity = min(max(purity, 1.0 / d - eps), 1.0 + eps)
    return max(0.0, -float(np.log(purity)))


def parity_support_check(dist: np.ndarray, n0: int, t: int) -> tuple[bool, float]:
    """Whether every site with n + t + n0 odd is empty; returns (ok, max violation).

    On an odd cycle the rule breaks once paths wrap around, i.e. it holds while
    n0 - t >= 0 and n0 + t < N.
    """
    N = len(dist)
    if t >= N:
        raise ValueError("parity rule only applies for t < N")
    n = np.arange(N)
    odd = (n + t + n0) % 2 == 1
    worst = float(np.abs(dist[odd]).max()) if odd.any() else 0.0
    return worst <= PARITY_TOL, worst
