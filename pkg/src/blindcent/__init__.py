"""Blind eigenvector-centrality estimation from filtered graph signals.

Estimate which eigenvector of a signal covariance matrix is the hidden
graph's eigenvector centrality, using only observed signals (filtered white
noise) and the fact that centralities live in the same-signed cone.
"""

from .errors import (
    AmbiguousIndexError,
    BlindCentError,
    DegenerateLeadingEigenvalueError,
    DegenerateSpectrumError,
    NonFiniteError,
    NotConnectedError,
    SingleEigenvalueError,
    ZeroEigengapError,
    ZeroEntryError,
    ZeroVectorError,
)
from .filters import (
    NAMED_FILTERS,
    FilterMatrix,
    FilterSpec,
    apply_filter,
    centrality_index_in_cy,
    filter_spectrum,
    format_filter,
    parse_filter,
)
from .graphs import (
    Graph,
    adjacency,
    eigenvector_centrality,
    erdos_renyi,
    is_connected,
    read_edge_list,
    watts_strogatz,
    write_edge_list,
)
from .harness import (
    ExperimentConfig,
    GraphContext,
    TrialRecord,
    build_graph_context,
    context_from_graph,
    eigengap_table,
    er_defaults,
    experiment_er,
    experiment_ws,
    localization_profile,
    run_trial,
    ws_defaults,
)
from .selection import (
    ConeProjection,
    SelectionResult,
    cone_score,
    oracle_optimal_index,
    project_to_cone,
    select_centrality,
    selection_correct,
)
from .signals import (
    CovarianceMatrix,
    SignalEnsemble,
    covariance_deviation,
    generate_signals,
    population_covariance,
    sample_covariance,
)
from .spectral import (
    SpectralDecomposition,
    canonical_sign,
    eig_sym,
    eigengap_at,
    rescale_unit_interval,
    sin_angle,
)
from .theory import (
    AlignmentCheck,
    BoundReport,
    alignment_bound,
    bound_report,
    deviation_bound,
    empirical_alignment_check,
    loglog_slope,
    sample_requirement,
)

__version__ = "0.1.0"
