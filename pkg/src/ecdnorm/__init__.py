"""Energy-constrained channel norms and entropic continuity bounds.

Numerical toolkit for bracketing the energy-constrained norm of a quantum
channel (or channel difference), computing Gibbs states and constrained
max-entropy values, and evaluating uniform continuity bounds for entropic
channel quantities at an input energy constraint.
"""

from .bounds import (
    BOUND_KINDS,
    BoundInputs,
    BoundValue,
    OscillatorEntropyBound,
    ShiftedGibbsEntropyBound,
    TabulatedEntropyBound,
    classical_capacity_bound,
    ea_capacity_bound_input,
    ea_capacity_bound_output,
    holevo_capacity_bound,
    holevo_quantity_bound,
    mutual_info_bound,
    optimize_t,
    smoothing_factor,
)
from .ecd import (
    DiamondEstimate,
    EcdEstimate,
    EcdProblem,
    StateTruncation,
    diamond_upper_bound,
    ecd_objective,
    estimate_diamond_norm,
    estimate_ecd_norm,
    state_truncation_bound,
    subspace_seminorm,
    truncation_norm_bound,
)
from .info import (
    Ensemble,
    channel_mutual_information,
    energy_gain,
    entropy,
    holevo_capacity_estimate,
    holevo_quantity,
    mutual_information,
    output_energy_sup,
    relative_entropy,
)
from .operators import (
    Channel,
    DensityOperator,
    Hamiltonian,
    HermitianPreservingMap,
    InfeasibleProblemError,
    apply_channel,
    choi_of,
    dagger,
    energy,
    hermitian_abs,
    is_hermitian,
    partial_trace,
    tensor,
    trace_norm,
)
from .optim import (
    EnergyCap,
    EnergyConstrainedSup,
    TraceNormObjective,
    energy_constrained_sup,
    golden_section_min,
    multistart_ascend,
    start_vectors,
)
from .thermo import (
    GibbsSolution,
    HarmonicModes,
    g,
    h2,
    max_entropy,
    oscillator_entropy_bound,
    shifted_bound_saturation,
    shifted_entropy_bound,
    solve_gibbs,
)
from .zoo import (
    TruncatedOscillator,
    attenuator,
    depolarize_to,
    identity_channel,
    phase_rotation,
    vacuum_state,
)

__version__ = "0.1.0"

__all__ = [
    "BOUND_KINDS",
    "BoundInputs",
    "BoundValue",
    "Channel",
    "DensityOperator",
    "DiamondEstimate",
    "EcdEstimate",
    "EcdProblem",
    "EnergyCap",
    "EnergyConstrainedSup",
    "Ensemble",
    "GibbsSolution",
    "Hamiltonian",
    "HarmonicModes",
    "HermitianPreservingMap",
    "InfeasibleProblemError",
    "OscillatorEntropyBound",
    "ShiftedGibbsEntropyBound",
    "StateTruncation",
    "TabulatedEntropyBound",
    "TraceNormObjective",
    "TruncatedOscillator",
    "apply_channel",
    "attenuator",
    "channel_mutual_information",
    "choi_of",
    "classical_capacity_bound",
    "dagger",
    "depolarize_to",
    "diamond_upper_bound",
    "ea_capacity_bound_input",
    "ea_capacity_bound_output",
    "ecd_objective",
    "energy",
    "energy_constrained_sup",
    "energy_gain",
    "entropy",
    "estimate_diamond_norm",
    "estimate_ecd_norm",
    "g",
    "golden_section_min",
    "h2",
    "hermitian_abs",
    "holevo_capacity_bound",
    "holevo_capacity_estimate",
    "holevo_quantity",
    "holevo_quantity_bound",
    "identity_channel",
    "is_hermitian",
    "max_entropy",
    "multistart_ascend",
    "mutual_info_bound",
    "mutual_information",
    "optimize_t",
    "oscillator_entropy_bound",
    "output_energy_sup",
    "partial_trace",
    "phase_rotation",
    "relative_entropy",
    "shifted_bound_saturation",
    "shifted_entropy_bound",
    "smoothing_factor",
    "solve_gibbs",
    "start_vectors",
    "state_truncation_bound",
    "subspace_seminorm",
    "tensor",
    "trace_norm",
    "truncation_norm_bound",
    "vacuum_state",
]
