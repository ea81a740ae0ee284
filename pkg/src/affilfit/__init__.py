"""Maximum likelihood fitting and inference for degree-parameterized
affiliation (bipartite) network models."""

__version__ = "0.1.0"

from .approx_inverse import (
    ApproxInverse,
    apply_approx_inverse,
    build_approx_inverse,
    dense_fisher,
    dense_inverse,
    inverse_approximation_error,
)
from .experiments import (
    CoverageReport,
    QQExport,
    run_consistency,
    run_coverage,
    run_qq,
)
from .graph import (
    BipartiteGraph,
    DegreeSequence,
    ParameterVector,
    degrees,
    prune_zero_degree,
)
from .inference import (
    InferenceResult,
    confidence_interval,
    contrast_se,
    infer,
    plugin_covariance,
)
from .likelihood import (
    FisherInfo,
    cross_entry_bounds,
    edge_probability,
    fisher_info,
    log_likelihood,
    score,
)
from .sampler import Scenario, make_scenario, sample_graph
from .solver import FitConfig, FitResult, existence_precheck, fit, newton_step

__all__ = [
    "ApproxInverse",
    "BipartiteGraph",
    "CoverageReport",
    "DegreeSequence",
    "FisherInfo",
    "FitConfig",
    "FitResult",
    "InferenceResult",
    "ParameterVector",
    "QQExport",
    "Scenario",
    "apply_approx_inverse",
    "build_approx_inverse",
    "confidence_interval",
    "contrast_se",
    "cross_entry_bounds",
    "degrees",
    "dense_fisher",
    "dense_inverse",
    "edge_probability",
    "existence_precheck",
    "fisher_info",
    "fit",
    "infer",
    "inverse_approximation_error",
    "log_likelihood",
    "make_scenario",
    "newton_step",
    "plugin_covariance",
    "prune_zero_degree",
    "run_consistency",
    "run_coverage",
    "run_qq",
    "sample_graph",
    "score",
]
