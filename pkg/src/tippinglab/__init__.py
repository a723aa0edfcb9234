"""Density tipping points of graph properties in uniform random graphs.

The package measures how the probability of acyclicity, planarity,
outerplanarity, and near-planarity collapses as the edge density d = m/n
of a uniform random graph G(n, m) grows, and fits closed-form models to
the measured transition curves. Exact oracles (forest counting, small-n
enumeration) validate the Monte Carlo machinery end to end.
"""

from .analysis import (
    ContourCurve,
    FitResult,
    SigmoidParams,
    contour,
    fit_transition,
    jacobian_transition,
    sigmoid_density,
    sigmoid_probability,
    transition_model,
    transition_width_ratio,
    width_ratio_limit,
)
from .experiment import (
    ExperimentPlan,
    FrequencySurface,
    SurfaceFormatError,
    SurfaceRow,
    canon_density,
    default_plan,
    density_grid,
    read_surface,
    run_multi_sweep,
    run_sweep,
    write_surface,
)
from .graph import (
    Graph,
    GraphError,
    GraphFormatError,
    complete_bipartite,
    complete_graph,
    connected_components,
    from_text,
    make_connected,
    to_text,
)
from .manifest import RunManifest, file_digest, read_manifest, verify_manifest, write_manifest
from .oracles import (
    EnumerationBudgetError,
    acyclic_probability,
    count_property_exact,
    enumerate_graphs,
    labeled_forest_count,
    total_forest_count,
)
from .randgen import (
    InfeasibleDensityError,
    RngState,
    derive_cell_seed,
    edge_count,
    random_simple_graph,
    round_half_up,
)
from .recognizers import (
    PROPERTIES,
    NearPlanarWitness,
    SignificantInterval,
    check_property,
    is_acyclic,
    is_near_planar,
    is_outerplanar,
    is_planar,
    significant_interval,
)

__all__ = [
    "ContourCurve",
    "EnumerationBudgetError",
    "ExperimentPlan",
    "FitResult",
    "FrequencySurface",
    "Graph",
    "GraphError",
    "GraphFormatError",
    "InfeasibleDensityError",
    "NearPlanarWitness",
    "PROPERTIES",
    "RngState",
    "RunManifest",
    "SigmoidParams",
    "SignificantInterval",
    "SurfaceFormatError",
    "SurfaceRow",
    "acyclic_probability",
    "canon_density",
    "check_property",
    "complete_bipartite",
    "complete_graph",
    "connected_components",
    "contour",
    "count_property_exact",
    "default_plan",
    "density_grid",
    "derive_cell_seed",
    "edge_count",
    "enumerate_graphs",
    "file_digest",
    "fit_transition",
    "from_text",
    "is_acyclic",
    "is_near_planar",
    "is_outerplanar",
    "is_planar",
    "jacobian_transition",
    "labeled_forest_count",
    "make_connected",
    "random_simple_graph",
    "read_manifest",
    "read_surface",
    "round_half_up",
    "run_multi_sweep",
    "run_sweep",
    "sigmoid_density",
    "sigmoid_probability",
    "significant_interval",
    "to_text",
    "total_forest_count",
    "transition_model",
    "transition_width_ratio",
    "verify_manifest",
    "width_ratio_limit",
    "write_manifest",
    "write_surface",
]
