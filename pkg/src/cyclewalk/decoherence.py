"""Kicked-coin decoherence: averaged superoperator, closed forms and stochastic engines.

Each walk step is followed by a coin kick exp(-i eps n.sigma) with eps uniform on
(-alpha, alpha). Averaging over eps turns the (k, k') block of the walker density
matrix into a 4 x 4 linear map on the Pauli components of the coin operator.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from cyclewalk.core import (
    HADAMARD,
    IDENTITY2,
    PAULI,
    PAULI_BASIS,
    _check_axis,
    matrix_power,
    partial_trace_coin,
)
from cyclewalk.walk import WalkState, _check_t, _m_k_stack, evolve_exact, m_k

COND_LIMIT = 1e8
PATH_SUM_MAX_T = 14
MC_BLOCK = 1024


def gamma_from_alpha(alpha: float) -> float:
    """sin(2 alpha) / (2 alpha), equal to 1 at alpha = 0."""
    if not 0 <= alpha <= np.pi / 2 + 1e-12:
        raise ValueError(f"alpha must lie in [0, pi/2] (got {alpha!r})")
    if alpha == 0:
        return 1.0
    return float(np.sin(2 * alpha) / (2 * alpha))


@dataclass(frozen=True)
class NoiseModel:
    axis: str
    alpha: float
    gamma: float = field(init=False)

    def __post_init__(self):
        _check_axis(self.axis)
        object.__setattr__(self, "gamma", gamma_from_alpha(self.alpha))


# -- Pauli-vector representation ----------------------------------------------------------

def pauli_vector(op: np.ndarray) -> np.ndarray:
    """Coefficients (a_I, a_x, a_y, a_z) with op = a_I I + a . sigma."""
    op = np.asarray(op)
    return np.array([np.trace(p @ op) / 2 for p in PAULI_BASIS], dtype=complex)


def pauli_operator(vec: np.ndarray) -> np.ndarray:
    return sum(c * p for c, p in zip(vec, PAULI_BASIS))


def superop_matrices(axis: str, gamma: float, k, kp, N: int) -> np.ndarray:
    """Stack of 4 x 4 superoperator matrices in the (I, sx, sy, sz) basis.

    ``k`` and ``kp`` broadcast against each other; the output has shape
    ``broadcast(k, kp).shape + (4, 4)``.
    """
    _check_axis(axis)
    k, kp = np.broadcast_arrays(np.asarray(k), np.asarray(kp))
    minus = 2 * np.pi * (k - kp) / N
    plus = 2 * np.pi * (k + kp) / N
    cm, sm, cp, sp = np.cos(minus), np.sin(minus), np.cos(plus), np.sin(plus)
    g = gamma
    # damping factors of the sigma_x, sigma_y, sigma_z output rows
    gx, gy, gz = {"x": (1, g, g), "y": (g, 1, g), "z": (g, g, 1)}[axis]
    O = np.zeros(k.shape + (4, 4), dtype=complex)
    O[..., 0, 0] = cm
    O[..., 0, 1] = -1j * sm
    O[..., 1, 2] = gx * sp
    O[..., 1, 3] = gx * cp
    O[..., 2, 2] = -gy * cp
    O[..., 2, 3] = gy * sp
    O[..., 3, 0] = -1j * gz * sm
    O[..., 3, 1] = gz * cm
    return O


def superop_matrix(noise: NoiseModel, k: int, kp: int, N: int) -> np.ndarray:
    for idx in (k, kp):
        if not 0 <= idx < N:
            raise ValueError(f"momentum index {idx} outside [0, {N})")
    return superop_matrices(noise.axis, noise.gamma, k, kp, N)


def apply_superop_direct(noise: NoiseModel, k: int, kp: int, N: int, rho2: np.ndarray) -> np.ndarray:
    """One averaged step on a 2 x 2 coin operator, with explicit matrices."""
    s = PAULI[noise.axis]
    core = m_k(k, N) @ rho2 @ m_k(kp, N).conj().T
    return 0.5 * (1 + noise.gamma) * core + 0.5 * (1 - noise.gamma) * s @ core @ s


# -- powers of the superoperator ----------------------------------------------------------

class SuperoperatorPropagator:
    """f~(k, k', t) over the whole momentum grid, reusable across t.

    Each (k, k') matrix is diagonalised once. Pairs whose eigenvector matrix has
    condition number above ``cond_limit`` (defective or nearly so) are powered
    by binary exponentiation instead.
    """

    def __init__(self, N: int, coin0: np.ndarray, noise: NoiseModel, cond_limit: float = COND_LIMIT):
        self.N = N
        self.noise = noise
        kk, kkp = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
        O = superop_matrices(noise.axis, noise.gamma, kk.ravel(), kkp.ravel(), N)
        a0 = pauli_vector(coin0)

        vals, vecs = np.linalg.eig(O)
        cond = np.linalg.cond(vecs)
        good = np.isfinite(cond) & (cond <= cond_limit)
        self._good = good
        self._vals = vals[good]
        coef = np.linalg.solve(vecs[good], np.broadcast_to(a0, (good.sum(), 4))[..., None])[..., 0]
        self._amp = 2 * vecs[good][:, 0, :] * coef
        self._bad_O = O[~good]
        self._a0 = a0

    @property
    def n_fallback(self) -> int:
        return len(self._bad_O)

    def grid(self, t: int) -> np.ndarray:
        t = _check_t(t)
        out = np.empty(self.N * self.N, dtype=complex)
        out[self._good] = np.einsum("pj,pj->p", self._amp, self._vals**t)
        if len(self._bad_O):
            out[~self._good] = 2 * (matrix_power(self._bad_O, t) @ self._a0)[:, 0]
        return out.reshape(self.N, self.N)

    def iter_grids(self, ts):
        """Yield (t, grid) for the sorted distinct ``ts``, advancing powers incrementally."""
        ts = sorted({_check_t(t) for t in ts})
        cur = 0
        pw = np.ones_like(self._vals)
        vec = np.broadcast_to(self._a0, (len(self._bad_O), 4)).copy()
        for t in ts:
            step = t - cur
            if step:
                pw = pw * self._vals**step
                if len(vec):
                    vec = (matrix_power(self._bad_O, step) @ vec[..., None])[..., 0]
            cur = t
            out = np.empty(self.N * self.N, dtype=complex)
            out[self._good] = np.einsum("pj,pj->p", self._amp, pw)
            out[~self._good] = 2 * vec[:, 0]
            yield t, out.reshape(self.N, self.N)


def f_tilde(k: int, kp: int, t: int, coin0: np.ndarray, noise: NoiseModel, N: int) -> complex:
    """Tr_coin of t applications of the averaged step to rho_coin."""
    t = _check_t(t)
    O = superop_matrix(noise, k, kp, N)
    a0 = pauli_vector(coin0)
    vals, vecs = np.linalg.eig(O)
    if np.isfinite(np.linalg.cond(vecs)) and np.linalg.cond(vecs) <= COND_LIMIT:
        coef = np.linalg.solve(vecs, a0)
        return complex(2 * np.sum(vecs[0] * coef * vals**t))
    return complex(2 * (matrix_power(O, t) @ a0)[0])


def f_tilde_closed_y(k: int, kp: int, t: int, p_x: float, N: int) -> complex:
    """Total-decoherence (gamma = 0) value of f~ for kicks about y.

    Written as cos^(t-1) (cos - i p_x sin) so that cos = 0 needs no special case.
    """
    t = _check_t(t)
    if k == kp:
        return 1.0 + 0j
    if t == 0:
        raise ValueError("closed form holds for t >= 1")
    theta = 2 * np.pi * (k - kp) / N
    c, s = np.cos(theta), np.sin(theta)
    return complex(c ** (t - 1) * (c - 1j * p_x * s))


def evolve_decohered(state: WalkState, t: int, noise: NoiseModel,
                     propagator: SuperoperatorPropagator | None = None) -> np.ndarray:
    """Kick-averaged walker density matrix after t steps (position basis)."""
    t = _check_t(t)
    if t == 0:
        return state.walker.copy()
    if propagator is None:
        propagator = SuperoperatorPropagator(state.N, state.coin0, noise)
    return state.decomposition.to_position(propagator.grid(t))


# -- path-sum oracle ---------------------------------------------------------------------

def path_sum_oracle(coin0: np.ndarray, k: int, kp: int, t: int, gamma: float, N: int) -> complex:
    """Sum over all 2^t kick histories for y-axis kicks.

    A history is a bit string; the step j rotation uses momentum
    (-1)^(b_1 + ... + b_{j-1}) k and the history weighs
    (1+gamma)^(t-s) (1-gamma)^s / 2^t with s the total bit count.
    """
    t = _check_t(t)
    if t > PATH_SUM_MAX_T:
        raise ValueError(f"path sum limited to t <= {PATH_SUM_MAX_T}")
    fwd = (_m_k_stack(np.array(k % N), N), _m_k_stack(np.array((-k) % N), N))
    fwd_p = (_m_k_stack(np.array(kp % N), N), _m_k_stack(np.array((-kp) % N), N))
    sums = np.zeros(1, dtype=int)
    left = IDENTITY2[None].copy()
    right = IDENTITY2[None].copy()
    for _ in range(t):
        odd = (sums % 2).astype(bool)
        ml = np.where(odd[:, None, None], fwd[1], fwd[0])
        mr = np.where(odd[:, None, None], fwd_p[1], fwd_p[0])
        left = ml @ left
        right = mr @ right
        sums = np.concatenate([sums, sums + 1])
        left = np.concatenate([left, left])
        right = np.concatenate([right, right])
    weights = (1 + gamma) ** (t - sums) * (1 - gamma) ** sums / 2**t
    traces = np.einsum("pab,bc,pac->p", left, coin0, right.conj())
    return complex(np.sum(weights * traces))


# -- Monte Carlo trajectories -------------------------------------------------------------

def trajectory_angles(seed: int, index: int, t: int, alpha: float) -> np.ndarray:
    """Kick angles of one trajectory; stream depends only on (seed, index)."""
    gen = np.random.Generator(np.random.Philox(key=seed, counter=[0, index, 0, 0]))
    return gen.uniform(-alpha, alpha, size=t)


def monte_carlo_evolve(state: WalkState, t: int, noise: NoiseModel, seed: int, samples: int) -> np.ndarray:
    """Average of ``samples`` kicked trajectories, traced over the coin."""
    t = _check_t(t)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if noise.alpha == 0:
        return evolve_exact(state, t)
    N = state.N
    # product eigen-decomposition of the initial joint state
    ww, vw = np.linalg.eigh(state.walker)
    wc, vc = np.linalg.eigh(state.coin0)
    keep_w, keep_c = ww > 1e-14, wc > 1e-14
    comps = np.einsum("nr,cs->rsnc", vw[:, keep_w], vc[:, keep_c])
    amps = np.sqrt(np.outer(ww[keep_w], wc[keep_c]))
    comps = (comps * amps[:, :, None, None]).reshape(-1, N, 2)

    s = PAULI[noise.axis]
    acc = np.zeros((N, N), dtype=complex)
    for start in range(0, samples, MC_BLOCK):
        idx = range(start, min(start + MC_BLOCK, samples))
        eps = np.stack([trajectory_angles(seed, i, t, noise.alpha) for i in idx])
        psi = np.broadcast_to(comps, (len(idx),) + comps.shape).copy()
        for j in range(t):
            psi = psi @ HADAMARD.T
            psi[..., 0] = np.roll(psi[..., 0], 1, axis=-1)
            psi[..., 1] = np.roll(psi[..., 1], -1, axis=-1)
            kick = (np.cos(eps[:, j])[:, None, None] * IDENTITY2
                    - 1j * np.sin(eps[:, j])[:, None, None] * s)
            psi = np.einsum("bcd,brnd->brnc", kick, psi)
        X = psi.transpose(2, 0, 1, 3).reshape(N, -1)
        acc += X @ X.conj().T
    rho = acc / samples
    return 0.5 * (rho + rho.conj().T)


def evolve_direct_kicked(state: WalkState, eps: np.ndarray, axis: str) -> np.ndarray:
    """Single trajectory with given kick angles, using full joint matrices."""
    from cyclewalk.walk import walk_step
    from cyclewalk.core import kick_unitary

    N = state.N
    step = walk_step(N)
    rho = state.joint()
    for e in eps:
        G = np.kron(np.eye(N), kick_unitary(axis, e)) @ step
        rho = G @ rho @ G.conj().T
    return partial_trace_coin(rho)
