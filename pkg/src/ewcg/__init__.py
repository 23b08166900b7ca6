"""Toolkit for distributed functional compression via edge-weighted
characteristic graphs: graph construction, b-fold fractional coloring,
entropy-rate estimation, and an end-to-end encoder/decoder simulation."""

from .coloring import (
    FoldedColoring,
    ReplicaTuple,
    b_fold_chromatic_number,
    fractional_chromatic_number,
    min_entropy_coloring,
    search_folded_coloring,
    split_replicas,
    validate_folded,
)
from .errors import (
    AmbiguousLookupError,
    CapacityError,
    ConfigError,
    EwcgError,
    InfeasibleColoringError,
    ValidationError,
)
from .graphs import (
    BipartiteGraph,
    Ewcg,
    FunctionTable,
    build_bipartite,
    builtin_function,
    power_graph,
    project_ewcg,
)
from .pipeline import BinningConfig, LookupTable, SimResult, build_lookup, decode, encode, simulate
from .prob import JointPmf, Pmf, conditional_entropy, entropy, joint_entropy, marginals
from .problem import ProblemSpec, load_spec, spec_from_dict
from .rates import (
    ColorPmf,
    RateReport,
    ccc_check,
    ccc_refine,
    color_pmf,
    conditional_color_entropy,
    entropy_rate,
    joint_color_pmf,
    rate_region,
    savings,
    subset_entropy_average,
)

__all__ = [name for name in dir() if not name.startswith("_")]
