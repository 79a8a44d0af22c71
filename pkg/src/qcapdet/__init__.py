"""Certified lower bounds on quantum channel capacities.

Send half of a bipartite probe state through a channel, measure a POVM on
reference plus output, and combine the outcome statistics with
channel-independent weights computed from the probe decomposition.  The
result is a lower bound on the quantum capacity (and on the private and
entanglement-assisted classical capacities) of the channel, with no process
tomography involved.
"""

from .certify import (
    CertificationResult,
    certify,
    coherent_information,
    depolarizing_isotropic_qdet,
    entropy_exchange,
    erasure_exact_capacity,
    erasure_qdet_closed_form,
    hashing_bound,
    measurement_diagnostics,
    qdet_from_statistics,
    threshold_fidelity,
)
from .channels import (
    QuantumChannel,
    apply_channel,
    apply_extended_channel,
    depolarizing_channel,
    erasure_channel,
    pauli_channel,
    weyl_unitary,
)
from .errors import (
    CertificationError,
    ConfigError,
    DegenerateMeasurementError,
    DimensionMismatchError,
    InternalConsistencyError,
    InvalidStateError,
)
from .harness import (
    SweepSpec,
    build_channel,
    build_povm,
    build_probe,
    estimate_qdet,
    figure_rows,
    parse_sweep,
    run_point,
    run_sweep,
    write_csv,
)
from .linalg import (
    SpectralDecomposition,
    binary_entropy,
    double_ket,
    double_ket_inner,
    hermitian_eigen,
    matrix_sqrt,
    operator_from_double_ket,
    partial_trace_reference,
    partial_trace_system,
    probability_vector,
    pseudo_inverse,
    shannon_entropy,
    validate_density_matrix,
    von_neumann_entropy,
)
from .measurement import (
    Povm,
    bell_povm,
    coarse_grain,
    erasure_povm,
    outcome_probabilities,
    pauli_bell_convolution,
    t_vector,
)
from .probes import (
    BipartiteProbeState,
    bell_diagonal_probe,
    custom_probe,
    isotropic_probe,
    max_entangled_probe,
    probe_from_density,
    reduced_system_state,
)
from .sampling import ShotRecord, derive_subseed, sample_outcomes, uniform_stream

__version__ = "0.1.0"

__all__ = [
    "BipartiteProbeState",
    "CertificationError",
    "CertificationResult",
    "ConfigError",
    "DegenerateMeasurementError",
    "DimensionMismatchError",
    "InternalConsistencyError",
    "InvalidStateError",
    "Povm",
    "QuantumChannel",
    "ShotRecord",
    "SpectralDecomposition",
    "SweepSpec",
    "apply_channel",
    "apply_extended_channel",
    "bell_diagonal_probe",
    "bell_povm",
    "binary_entropy",
    "build_channel",
    "build_povm",
    "build_probe",
    "certify",
    "coarse_grain",
    "coherent_information",
    "custom_probe",
    "depolarizing_channel",
    "depolarizing_isotropic_qdet",
    "derive_subseed",
    "double_ket",
    "double_ket_inner",
    "entropy_exchange",
    "erasure_channel",
    "erasure_exact_capacity",
    "erasure_povm",
    "erasure_qdet_closed_form",
    "estimate_qdet",
    "figure_rows",
    "hashing_bound",
    "hermitian_eigen",
    "isotropic_probe",
    "matrix_sqrt",
    "max_entangled_probe",
    "measurement_diagnostics",
    "operator_from_double_ket",
    "outcome_probabilities",
    "parse_sweep",
    "partial_trace_reference",
    "partial_trace_system",
    "pauli_bell_convolution",
    "pauli_channel",
    "probability_vector",
    "probe_from_density",
    "pseudo_inverse",
    "qdet_from_statistics",
    "reduced_system_state",
    "run_point",
    "run_sweep",
    "sample_outcomes",
    "shannon_entropy",
    "t_vector",
    "threshold_fidelity",
    "uniform_stream",
    "validate_density_matrix",
    "von_neumann_entropy",
    "weyl_unitary",
    "write_csv",
]
