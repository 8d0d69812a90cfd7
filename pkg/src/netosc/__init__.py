"""Oscillation-model dynamics on directed weighted graphs."""
from .algebra import (
    REP_A,
    REP_B,
    EvolutionOperator,
    Representation,
    anticommutator,
    evolution_operator,
    intertwiner,
    matrix_a,
    matrix_b,
    operator_square_diagnostic,
    representation,
    verify_representation,
)
from .dynamics import (
    WaveState,
    integrate_fundamental,
    integrate_wave,
    lift_initial_condition,
    project_state,
    verify_wave_consistency,
    wave_energy,
)
from .echo import (
    EchoScenario,
    block_system,
    compare_representations,
    coupling_C,
    detect_phase_lock,
    growth_rate_check,
    integrate_psi,
    integrate_theta,
    observables,
    theta_from_psi,
)
from .graph import (
    Graph,
    adjacency_matrix,
    build_graph,
    complete_graph,
    degree_matrix,
    laplacian,
    normalized_laplacian,
    semi_normalized_laplacian,
    spectral_decomposition,
)
from .integrators import Trajectory

__version__ = "0.1.0"
