"""Reproducibility checks for classical N-player two-strategy games played
with shared entangled states and local unitary strategies."""

from qgr.kernel import (
    IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z, HADAMARD,
    tensor_apply, inner, su2_from_angles, eig2,
)
from qgr.states import StateSpec, make_state, verify_uniform_form
from qgr.games import (
    GameN, Partition, extend_2x2, make_native, catalog_game,
    classify_group, payoff_partition,
    classical_pure_payoff, classical_mixed_payoff,
)
from qgr.referee import (
    output_states, build_measurement_scr, build_measurement_wcr,
    quantum_payoff, mixed_profile_ops, reproduce_mixed_check,
)
from qgr.criteria import (
    scr_check, wcr_check, operator_structure, state_structure_check,
    symbolic_contradiction, wk_unitarity_check,
)
from qgr.search import required_pairs, residual, feasibility_search, SearchConfig

__version__ = "0.1.0"
