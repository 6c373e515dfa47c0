"""Statistical limit laws on word spheres of strongly Markov coded groups.

The package pipeline: build or load a Markov coding (``coding``), put
vector-valued weights on its edges (``weights``), extract drift and
fluctuation parameters from transfer-matrix Perron data (``spectral``),
enumerate exact weight distributions over word spheres with big-integer
dynamic programming (``enumerate``), and verify the limit laws --
averaging, CLT, Berry-Esseen, large deviations, multidimensional CLT,
local limit, degeneracy -- against those exact counts (``limits``).  The
``hypstat`` command line wires the pipeline end to end (``cli``).
"""

from .coding import (
    IDENTITY_LABEL,
    START_VERTEX,
    ZERO_VERTEX,
    CodingEdge,
    CodingValidationReport,
    Component,
    ComponentDecomposition,
    GrowthReport,
    MarkovCoding,
    build_free_group_coding,
    check_coding,
    component_period,
    count_words,
    decompose_components,
    dump_coding,
    free_group_word_counts,
    growth_rate,
    load_coding,
    sphere_counts,
    validate_coding,
)
from .enumerate import (
    MomentData,
    WordDistribution,
    brute_force_oracle,
    count_avoiding_maximal,
    distribution,
    distribution_from_json,
    distribution_overcounted,
    distribution_sweep,
    distribution_to_json,
    lattice_masses_2d,
    log_weighted_sum_sweep,
    moment_sweep,
    moments,
    weighted_sum,
)
from .errors import (
    HypstatError,
    InconsistencyError,
    InvalidArgumentError,
    NumericalError,
    PreconditionError,
    ResourceError,
    StructureError,
    ValidationError,
)
from .limits import (
    LimitLawReport,
    averaging_table,
    berry_esseen_bound,
    berry_esseen_report,
    clt_distance,
    degeneracy_check,
    kolmogorov_distance,
    ldt_rate,
    llt_check,
    mclt_check,
    report_from_json,
    report_to_json,
    reverify,
)
from .spectral import (
    ComponentConsistencyReport,
    GapPoint,
    LimitStatistics,
    PressureReport,
    TransferMatrix,
    component_consistency,
    covariance_matrix,
    drift_and_variance,
    limit_statistics,
    nonlattice_gap,
    pressure,
    spectral_radius,
    transfer_matrix,
)
from .weights import (
    WeightAssignment,
    dump_weights,
    inverse_name,
    lattice_scale,
    load_weights,
    path_sum,
    recenter,
    scaled_integer_values,
    weights_from_edge_table,
    weights_from_homomorphism,
    weights_word_length,
)

__version__ = "1.0.0"

__all__ = [
    "IDENTITY_LABEL",
    "START_VERTEX",
    "ZERO_VERTEX",
    "CodingEdge",
    "CodingValidationReport",
    "Component",
    "ComponentDecomposition",
    "GrowthReport",
    "MarkovCoding",
    "build_free_group_coding",
    "check_coding",
    "component_period",
    "count_words",
    "decompose_components",
    "dump_coding",
    "free_group_word_counts",
    "growth_rate",
    "load_coding",
    "sphere_counts",
    "validate_coding",
    "MomentData",
    "WordDistribution",
    "brute_force_oracle",
    "count_avoiding_maximal",
    "distribution",
    "distribution_from_json",
    "distribution_overcounted",
    "distribution_sweep",
    "distribution_to_json",
    "lattice_masses_2d",
    "log_weighted_sum_sweep",
    "moment_sweep",
    "moments",
    "weighted_sum",
    "HypstatError",
    "InconsistencyError",
    "InvalidArgumentError",
    "NumericalError",
    "PreconditionError",
    "ResourceError",
    "StructureError",
    "ValidationError",
    "LimitLawReport",
    "averaging_table",
    "berry_esseen_bound",
    "berry_esseen_report",
    "clt_distance",
    "degeneracy_check",
    "kolmogorov_distance",
    "ldt_rate",
    "llt_check",
    "mclt_check",
    "report_from_json",
    "report_to_json",
    "reverify",
    "ComponentConsistencyReport",
    "GapPoint",
    "LimitStatistics",
    "PressureReport",
    "TransferMatrix",
    "component_consistency",
    "covariance_matrix",
    "drift_and_variance",
    "limit_statistics",
    "nonlattice_gap",
    "pressure",
    "spectral_radius",
    "transfer_matrix",
    "WeightAssignment",
    "dump_weights",
    "inverse_name",
    "lattice_scale",
    "load_weights",
    "path_sum",
    "recenter",
    "scaled_integer_values",
    "weights_from_edge_table",
    "weights_from_homomorphism",
    "weights_word_length",
    "__version__",
]
