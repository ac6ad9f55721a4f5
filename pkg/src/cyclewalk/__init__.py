"""Coined quantum walk on a cycle with kicked-coin decoherence and a discrete Wigner layer."""

__version__ = "0.1.0"

from cyclewalk.core import (
    BlochCoin,
    UNBIASED_COIN,
    coin_density,
    dft_matrix,
    kick_unitary,
    partial_trace_coin,
    shift_operators,
)
from cyclewalk.walk import (
    WalkState,
    classical_walk,
    evolve_direct,
    evolve_exact,
    f_coeff,
    m_k,
    walk_step,
)
from cyclewalk.decoherence import (
    NoiseModel,
    evolve_decohered,
    f_tilde,
    f_tilde_closed_y,
    gamma_from_alpha,
    monte_carlo_evolve,
    path_sum_oracle,
    superop_matrix,
)
from cyclewalk.wigner import (
    LineSpec,
    WignerGrid,
    line_sum,
    phase_point_operator,
    reconstruct_density,
    wigner_function,
)
from cyclewalk.observables import (
    linear_entropy,
    momentum_distribution,
    parity_support_check,
    position_distribution,
)
