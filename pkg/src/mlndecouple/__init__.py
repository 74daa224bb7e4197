"""Degree hubs and closeness-central nodes of two-layer multilayer networks,
computed from per-layer summaries instead of the aggregated graph."""

from .analysis import (
    ClosenessSummary,
    DegreeSummary,
    Neighborhoods,
    Retention,
    analyze_closeness,
    analyze_degree,
    analyze_layers,
    load_summary,
    save_summary,
)
from .composition import (
    ClosenessCompositionResult,
    ClosenessMethod,
    CompositionError,
    DegreeCompositionResult,
    DegreeMethod,
    cc1,
    cc2,
    compose,
    dc_a1,
    dc_a2,
    dc_a2_with_info,
    dc_p1,
    dc_p2,
    naive_and_cc,
    naive_or,
    resolve_method,
)
from .graph import (
    EdgeListError,
    GraphError,
    LayerGraph,
    MultilayerNetwork,
    build_mln,
    load_edge_list,
    read_edge_list,
    save_edge_list,
)
from .metrics import SetComparison, compare_sets, summarize
from .oracle import aggregate, brute_force_check, ground_truth_cc_nodes, ground_truth_degree_hubs
from .synth import GenSpec, Split, build_suite, generate_normal, generate_rmat, split_layers

__version__ = "0.1.0"
