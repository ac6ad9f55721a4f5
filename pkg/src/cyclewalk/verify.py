"""Small, fast versions of the cross-engine oracle checks, run by ``cyclewalk verify``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cyclewalk.core import BlochCoin, coin_density
from cyclewalk.decoherence import (
    NoiseModel,
    apply_superop_direct,
    evolve_decohered,
    f_tilde,
    f_tilde_closed_y,
    pauli_operator,
    pauli_vector,
    path_sum_oracle,
    superop_matrix,
)
from cyclewalk.observables import position_distribution
from cyclewalk.walk import (
    WalkState,
    classical_walk,
    evolve_direct,
    evolve_exact,
    localized_state,
    momentum_state,
)
from cyclewalk.wigner import LineSpec, line_sum, reconstruct_density, wigner_function


@dataclass
class CheckResult:
    name: str
    error: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tol)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name:<28} max error {self.error:.2e} (tol {self.tol:.0e})"


def random_coin(rng) -> np.ndarray:
    v = rng.normal(size=3)
    v *= rng.uniform(0, 1) / np.linalg.norm(v)
    return coin_density(BlochCoin(*v))


def random_density(N: int, rng, rank: int | None = None) -> np.ndarray:
    rank = rank or N
    G = rng.normal(size=(N, rank)) + 1j * rng.normal(size=(N, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho)


def check_engines(rng) -> CheckResult:
    err = 0.0
    for _ in range(5):
        N = int(rng.integers(2, 16))
        st = WalkState(random_density(N, rng), random_coin(rng))
        t = int(rng.integers(0, 20))
        err = max(err, np.abs(evolve_exact(st, t) - evolve_direct(st, t)).max())
    return CheckResult("momentum vs direct engine", err, 1e-10)


def check_superop(rng) -> CheckResult:
    err = 0.0
    for axis in "xyz":
        for _ in range(10):
            N = int(rng.integers(2, 30))
            k, kp = (int(x) for x in rng.integers(0, N, 2))
            noise = NoiseModel(axis, rng.uniform(0, np.pi / 2))
            rho2 = random_coin(rng)
            via_matrix = pauli_operator(superop_matrix(noise, k, kp, N) @ pauli_vector(rho2))
            err = max(err, np.abs(via_matrix - apply_superop_direct(noise, k, kp, N, rho2)).max())
    return CheckResult("superoperator matrix", err, 1e-12)


def check_closed_form(rng) -> CheckResult:
    err = 0.0
    noise = NoiseModel("y", np.pi / 2)
    for _ in range(20):
        N = 4 * int(rng.integers(1, 10))
        k, kp = (int(x) for x in rng.integers(0, N, 2))
        t = int(rng.integers(1, 100))
        rho2 = random_coin(rng)
        p_x = BlochCoin.from_density(rho2).p_x
        err = max(err, abs(f_tilde(k, kp, t, rho2, noise, N) - f_tilde_closed_y(k, kp, t, p_x, N)))
    return CheckResult("gamma=0 closed form", err, 1e-10)


def check_path_sum(rng) -> CheckResult:
    err = 0.0
    for _ in range(5):
        N = int(rng.integers(3, 20))
        k, kp = (int(x) for x in rng.integers(0, N, 2))
        t = int(rng.integers(1, 9))
        noise = NoiseModel("y", rng.uniform(0, np.pi / 2))
        rho2 = random_coin(rng)
        err = max(err, abs(f_tilde(k, kp, t, rho2, noise, N) - path_sum_oracle(rho2, k, kp, t, noise.gamma, N)))
    return CheckResult("path-sum expansion", err, 1e-10)


def check_wigner(rng) -> CheckResult:
    err = 0.0
    for N in (5, 8, 13):
        rho = random_density(N, rng)
        W = wigner_function(rho)
        err = max(err, np.abs(reconstruct_density(W) - rho).max())
        pos = [line_sum(W, LineSpec.vertical(q)) for q in range(2 * N)]
        err = max(err, np.abs(np.array(pos[::2]) - np.real(np.diag(rho))).max(), np.abs(pos[1::2]).max())
    return CheckResult("Wigner round trip/marginals", err, 1e-10)


def check_pointer_states(rng) -> CheckResult:
    err = 0.0
    N = 11
    for axis in "xyz":
        k = int(rng.integers(0, N))
        st = WalkState(momentum_state(N, k), random_coin(rng))
        out = evolve_decohered(st, 20, NoiseModel(axis, 0.3 * np.pi))
        err = max(err, np.abs(out - st.walker).max())
    return CheckResult("momentum pointer states", err, 1e-10)


def check_classical_limit(rng) -> CheckResult:
    N, n0, t = 31, 15, 12
    st = WalkState(localized_state(N, n0), coin_density(BlochCoin(0, 1, 0)))
    p = position_distribution(evolve_decohered(st, t, NoiseModel("y", np.pi / 2)))
    return CheckResult("total decoherence = classical", np.abs(p - classical_walk(n0, t, N)).max(), 1e-8)


CHECKS = (check_engines, check_superop, check_closed_form, check_path_sum,
          check_wigner, check_pointer_states, check_classical_limit)


def run_all(seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    return [check(rng) for check in CHECKS]
