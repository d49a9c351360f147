from spectraltools.alternating_projection import (
    AltProjConfig,
    alternating_projection,
    project_rank,
    project_toeplitz,
)
from spectraltools.bench import (
    BenchReport,
    TrialRecord,
    harness_config,
    presets_to_specs,
    read_csv,
    records_from_frame,
    run_bench,
    run_trial,
)
from spectraltools.cmat import (
    format_cmat,
    parse_cmat,
    parse_vector,
    read_cmat,
    read_vector,
    write_cmat,
    write_vector,
)
from spectraltools.constants import (
    BENCH_PRESETS,
    CSV_COLUMNS,
    DEFAULT_RANK_THRESHOLD,
    EPS_RANK_LEVELS,
    RNG_NAME,
    VALID_KINDS,
    VALID_METHODS,
)
from spectraltools.errors import (
    EstimationError,
    GeneratorInfeasibleError,
    GuaranteeRegimeWarning,
    IdentifiabilityError,
    IllConditionedError,
    InitializationError,
    InvalidArgumentError,
    NoSignalError,
)
from spectraltools.estimators import (
    HankelEstimate,
    SubspaceEstimate,
    ToeplitzEstimate,
    fourier_subspace_estimate,
    hankel_estimate,
    recover_amplitudes,
    recover_amplitudes_from_column,
    toeplitz_estimate,
)
from spectraltools.gradient_music import (
    GradientMusicConfig,
    MusicLandscape,
    SpectralParams,
    descend,
    detect_rank,
    estimate_frequencies,
    grid_initializers,
    grid_objective,
    objective,
    objective_gradient,
)
from spectraltools.instances import (
    Instance,
    NoiseModel,
    ProblemSpec,
    draw_instance,
    gen_amplitudes,
    gen_frequencies,
    gen_toeplitz_noise,
    gen_vector_noise,
    trial_seed,
)
from spectraltools.structured_linalg import (
    OrthonormalBasis,
    ToeplitzMatrix,
    eps_rank,
    fourier_matrix,
    hankel_from_params,
    hankel_lift,
    leading_left_subspace,
    least_squares_inverse_apply,
    low_rank_approximation,
    sin_theta,
    singular_values,
    toeplitz_from_params,
    toeplitz_lift,
    truncated_svd,
)
from spectraltools.torus import (
    FrequencySet,
    TorusPoint,
    canonicalize,
    matching_distance_inf,
    min_separation,
    wrap_distance,
)

__all__ = [
    # constants
    "BENCH_PRESETS",
    "CSV_COLUMNS",
    "DEFAULT_RANK_THRESHOLD",
    "EPS_RANK_LEVELS",
    "RNG_NAME",
    "VALID_KINDS",
    "VALID_METHODS",
    # errors and warnings
    "EstimationError",
    "GeneratorInfeasibleError",
    "GuaranteeRegimeWarning",
    "IdentifiabilityError",
    "IllConditionedError",
    "InitializationError",
    "InvalidArgumentError",
    "NoSignalError",
    # torus geometry
    "FrequencySet",
    "TorusPoint",
    "canonicalize",
    "matching_distance_inf",
    "min_separation",
    "wrap_distance",
    # structured linear algebra
    "OrthonormalBasis",
    "ToeplitzMatrix",
    "eps_rank",
    "fourier_matrix",
    "hankel_from_params",
    "hankel_lift",
    "leading_left_subspace",
    "least_squares_inverse_apply",
    "low_rank_approximation",
    "sin_theta",
    "singular_values",
    "toeplitz_from_params",
    "toeplitz_lift",
    "truncated_svd",
    "format_cmat",
    "parse_cmat",
    "parse_vector",
    "read_cmat",
    "read_vector",
    "write_cmat",
    "write_vector",
    # gradient-music
    "GradientMusicConfig",
    "MusicLandscape",
    "SpectralParams",
    "descend",
    "detect_rank",
    "estimate_frequencies",
    "grid_initializers",
    "grid_objective",
    "objective",
    "objective_gradient",
    # estimators
    "HankelEstimate",
    "SubspaceEstimate",
    "ToeplitzEstimate",
    "fourier_subspace_estimate",
    "hankel_estimate",
    "recover_amplitudes",
    "recover_amplitudes_from_column",
    "toeplitz_estimate",
    # baseline
    "AltProjConfig",
    "alternating_projection",
    "project_rank",
    "project_toeplitz",
    # experiments
    "BenchReport",
    "Instance",
    "NoiseModel",
    "ProblemSpec",
    "TrialRecord",
    "draw_instance",
    "gen_amplitudes",
    "gen_frequencies",
    "gen_toeplitz_noise",
    "gen_vector_noise",
    "harness_config",
    "presets_to_specs",
    "read_csv",
    "records_from_frame",
    "run_bench",
    "run_trial",
    "trial_seed",
]
