"""Influential-node identification by local information dimensionality."""

from .centrality import (
    MEASURES,
    FitSample,
    RankList,
    ScoreVector,
    betweenness_centrality,
    box_profile,
    closeness_centrality,
    degree_centrality,
    discrete_lid_estimate,
    eigenvector_centrality,
    local_dimension,
    local_information_dimensionality,
    ols_slope,
    rank,
)
from .epidemic import SIConfig, SITrace, si_ensemble, si_run, spreading_ability
from .evaluation import TauResult, kendall_tau_a, scatter_table, tau_sweep, topk_overlap
from .graph_core import (
    EdgeList,
    Graph,
    GraphError,
    GraphStats,
    bfs_distances,
    build_graph,
    graph_stats,
    karate,
    largest_component,
    parse_edge_list,
    parse_pajek,
    read_graph,
)

__version__ = "0.1.0"
