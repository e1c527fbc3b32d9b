"""Random vector functional link networks with analytic weights, Monte-Carlo
diagnostics and GMRA-chart approximation on manifolds."""

__version__ = "0.1.0"

from .activation import (
    Activation,
    TruncatedTrig,
    custom_activation,
    get_activation,
    normalize_to_unit_integral,
    trunc_cos,
    trunc_sin,
)
from .domain import (
    CompactDomain,
    EmbeddedSphere,
    covering_number_bound,
    sample_sphere,
    sample_uniform,
    test_function_exp_sum,
)
from .gmra import GMRATree, accuracy_profile, gmra_build, nearest_center, project
from .manifold import ChartModel, ManifoldModel, chart_function, predict, relative_error_suite, train_manifold
from .montecarlo import MCEstimate, bennett_bound, mc_integrate, mc_variance, verify_mse_law
from .rvfl import (
    RVFLNetwork,
    analytic_weights,
    estimate_complexity_constants,
    evaluate,
    l2_error,
    lsq_train,
    node_bound,
)
from .sampler import NodeSample, ParamConfig, derive_L, sample_nodes

__all__ = [
    "Activation",
    "TruncatedTrig",
    "custom_activation",
    "get_activation",
    "normalize_to_unit_integral",
    "trunc_cos",
    "trunc_sin",
    "CompactDomain",
    "EmbeddedSphere",
    "covering_number_bound",
    "sample_sphere",
    "sample_uniform",
    "test_function_exp_sum",
    "GMRATree",
    "accuracy_profile",
    "gmra_build",
    "nearest_center",
    "project",
    "ChartModel",
    "ManifoldModel",
    "chart_function",
    "predict",
    "relative_error_suite",
    "train_manifold",
    "MCEstimate",
    "bennett_bound",
    "mc_integrate",
    "mc_variance",
    "verify_mse_law",
    "RVFLNetwork",
    "analytic_weights",
    "estimate_complexity_constants",
    "evaluate",
    "l2_error",
    "lsq_train",
    "node_bound",
    "NodeSample",
    "ParamConfig",
    "derive_L",
    "sample_nodes",
]
