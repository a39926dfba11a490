"""Design and open-system simulation of frequency-modulated Rydberg
controlled-phase gates, with robustness studies and a two-qubit
amplitude-amplification demo."""

__version__ = "0.1.0"

from .design import (
    GateDesign,
    bessel_j,
    design_gate,
    effective_couplings,
    frame_phase,
    population_phase_curve,
    reduced_three_level_propagate,
    reduced_two_level_propagate,
    return_ratio_candidates,
    solve_alpha,
    J0_FIRST_ZERO,
)
from .grover import SearchResult, SearchSpec, run_search
from .lindblad import (
    EvolutionResult,
    IntegratorConfig,
    dissipator,
    evolve,
    floquet_map,
    time_averaged_rr,
)
from .linalg import (
    dagger,
    expectation,
    hermitian_eigenvalues,
    ket,
    tensor_product,
    validate_density_matrix,
    w_state,
)
from .protocol import (
    GateChannel,
    average_gate_fidelity,
    bell_fidelity,
    build_schedule,
    cphase_unitary,
    fidelity_trajectory,
    realize_channel,
)
from .pulses import (
    PulseShape,
    amplitude_at,
    gaussian_pulse,
    gaussian_width_for_area,
    gaussian_width_tail_approx,
    square_pulse,
)
from .robustness import (
    DisorderSpec,
    DopplerSpec,
    apply_deviation,
    disorder_sweep,
    doppler_shift_sample,
    doppler_sweep,
)
from .system import (
    DriveParams,
    SystemParams,
    detuning_at,
    hamiltonian_at,
    laser_phase_at,
    vdw_interaction,
)

__all__ = [
    "__version__",
    "GateDesign", "bessel_j", "design_gate", "effective_couplings",
    "frame_phase", "population_phase_curve", "reduced_three_level_propagate",
    "reduced_two_level_propagate", "return_ratio_candidates", "solve_alpha",
    "J0_FIRST_ZERO",
    "SearchResult", "SearchSpec", "run_search",
    "EvolutionResult", "IntegratorConfig", "dissipator", "evolve",
    "floquet_map", "time_averaged_rr",
    "dagger", "expectation", "hermitian_eigenvalues", "ket",
    "tensor_product", "validate_density_matrix", "w_state",
    "GateChannel", "average_gate_fidelity", "bell_fidelity", "build_schedule",
    "cphase_unitary", "fidelity_trajectory", "realize_channel",
    "PulseShape", "amplitude_at", "gaussian_pulse", "gaussian_width_for_area",
    "gaussian_width_tail_approx", "square_pulse",
    "DisorderSpec", "DopplerSpec", "apply_deviation", "disorder_sweep",
    "doppler_shift_sample", "doppler_sweep",
    "DriveParams", "SystemParams", "detuning_at", "hamiltonian_at",
    "laser_phase_at", "vdw_interaction",
]
