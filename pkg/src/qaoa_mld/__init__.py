"""QAOA-based maximum-likelihood detection of BPSK symbols over MIMO channels."""
from .adiabatic import (
    EvolutionResult,
    SpectrumTrace,
    interpolated_hamiltonian,
    mixer_matrix,
    runtime_bound,
    single_qubit_spectrum_closed_form,
    spectrum_trace,
    trotter_evolve,
)
from .complexity import complexity_report, gate_count, max_qubits, memory_estimate
from .detect import (
    BerReport,
    DetectorKind,
    TrialConfig,
    detect_cml,
    detect_mmse,
    detect_qml,
    run_ber,
    run_qml,
    run_qml_many,
    wilson_interval,
)
from .encoding import (
    ChannelInstance,
    IsingModel,
    bit_of_spin,
    classical_objective,
    diagonal,
    encode_mimo,
    encode_multiuser,
    energy,
    spin_of_bit,
)
from .errors import DegenerateGapError, DimensionError, InstanceFormatError, SizeError
from .optimize import (
    OptimizationResult,
    OptimizerConfig,
    grid_seed_points,
    minimize_fp,
    minimize_fp_many,
)
from .qaoa import (
    LandscapeGrid,
    QaoaParams,
    analytic_f1_single,
    expectation_fp,
    f1_factored,
    landscape,
    prepare_ansatz,
)
from .statevector import (
    StateVector,
    apply_diagonal_phase,
    apply_x_rotations,
    expectation_diagonal,
    sample_bitstrings,
    symmetric_eigendecomposition,
    uniform_superposition,
)

__version__ = "0.1.0"
