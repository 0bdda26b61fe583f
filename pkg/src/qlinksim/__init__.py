"""Link-level simulator for qubit communication channels.

Classical symbols are mapped to qubit density matrices, pushed through a
configurable channel model, detected with the square-root (pretty-good)
measurement, and scored by symbol and bit error rate.  See the README
for the JSON config schema and CLI usage.
"""

from .channels import (
    BosonicConfig,
    Channel,
    ChannelConfig,
    DephasingConfig,
    DepolarizingConfig,
    ErasureConfig,
    PMDConfig,
    TurbulenceConfig,
    beamsplitter_unitary,
    bosonic_apply,
    dephasing_apply,
    depolarizing_apply,
    erasure_apply,
    haar_unitary,
    pmd_apply,
    pointing_loss_factor,
    pure_loss_apply,
    sample_scintillation,
    thermal_state,
    turbulence_apply,
)
from .detection import (
    POVM,
    build_pgm,
    decide,
    decide_sampled,
    embed_povm_with_erasure,
    measurement_scores,
)
from .metrics import compute_ber, compute_ser
from .modulation import (
    ConstellationPoint,
    DetectorCodebook,
    embed_alpha,
    qam_codebook,
    qam_constellation,
    qpsk_codebook,
    symbols_to_bits,
)
from .pipeline import (
    VERSION as __version__,
)
from .pipeline import (
    ChannelRunResult,
    SimulationConfig,
    SimulationReport,
    default_config_path,
    derive_rng,
    load_config,
    run_comparison,
    run_simulation,
    write_states_csv,
)
from .states import (
    BlochVector,
    DegenerateStateError,
    DensityMatrix,
    InvalidStateError,
    bloch_vector,
    hermitize,
    inv_sqrt_psd,
    kron,
    leading_qubit_block,
    make_pure,
    mat_sqrt_psd,
    partial_trace_second,
    purity,
    validate_density,
)
from .visualization import (
    ConstellationPlotPoint,
    bloch_points,
    constellation_point,
    render_bloch_svg,
    render_constellation_svg,
)

__all__ = [
    "__version__",
    "BlochVector",
    "BosonicConfig",
    "Channel",
    "ChannelConfig",
    "ChannelRunResult",
    "ConstellationPlotPoint",
    "ConstellationPoint",
    "DegenerateStateError",
    "DensityMatrix",
    "DephasingConfig",
    "DepolarizingConfig",
    "DetectorCodebook",
    "ErasureConfig",
    "InvalidStateError",
    "PMDConfig",
    "POVM",
    "SimulationConfig",
    "SimulationReport",
    "TurbulenceConfig",
    "beamsplitter_unitary",
    "bloch_points",
    "bloch_vector",
    "bosonic_apply",
    "build_pgm",
    "compute_ber",
    "compute_ser",
    "constellation_point",
    "decide",
    "decide_sampled",
    "default_config_path",
    "dephasing_apply",
    "depolarizing_apply",
    "derive_rng",
    "embed_alpha",
    "embed_povm_with_erasure",
    "erasure_apply",
    "haar_unitary",
    "hermitize",
    "inv_sqrt_psd",
    "kron",
    "leading_qubit_block",
    "load_config",
    "make_pure",
    "mat_sqrt_psd",
    "measurement_scores",
    "partial_trace_second",
    "pmd_apply",
    "pointing_loss_factor",
    "pure_loss_apply",
    "purity",
    "qam_codebook",
    "qam_constellation",
    "qpsk_codebook",
    "render_bloch_svg",
    "render_constellation_svg",
    "run_comparison",
    "run_simulation",
    "sample_scintillation",
    "symbols_to_bits",
    "thermal_state",
    "turbulence_apply",
    "validate_density",
    "write_states_csv",
]
