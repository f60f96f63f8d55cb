"""Non-backtracking spectra and site-percolation bound verification.

The package computes Hashimoto (oriented line graph) spectral quantities of
finite graphs and of BFS truncations of locally finite graphs, runs seeded
Monte Carlo site percolation, and checks spectral lower bounds on the
percolation, susceptibility, and uniqueness transitions together with
explicit pairwise-connectivity envelopes.
"""

__version__ = "0.1.0"

from .graphs import Graph, build_graph, bfs_distance, read_edge_list, write_edge_list
from .generators import generate, tree, cycle, complete, grid_ball, random_regular, petersen
from .localrules import LocalRuleGraph, SubgraphSequence, tree_rule, grid2d_rule, graph_rule, truncate
from .hashimoto import ArcSet, HashimotoMatrix, build_arcs, hashimoto, strong_ell_connected
from .spectral import SpectralResult, PowerIterationError, spectral_radius
from .growth import GrowthEstimate, GraphGrowth, walk_norms, walk_norms_from_vertex, growth_for_graph
from .percolation import (
    Configuration,
    ClusterLabeling,
    PercolationEstimate,
    sample,
    label_clusters,
    estimate_tau,
    estimate_chi,
    estimate_theta_proxy,
    exact_tau,
    exact_chi,
    exact_reach,
    exact_theta_proxy,
)
from .bounds import (
    ThresholdBounds,
    ConnectivityEnvelope,
    EnvelopeInapplicable,
    EnvelopeVerification,
    RhoSequenceReport,
    DecayFit,
    threshold_bounds,
    connectivity_envelope,
    verify_envelope,
    rho_sequence,
    decay_diagnostic,
)

__all__ = [
    "Graph",
    "build_graph",
    "bfs_distance",
    "read_edge_list",
    "write_edge_list",
    "generate",
    "tree",
    "cycle",
    "complete",
    "grid_ball",
    "random_regular",
    "petersen",
    "LocalRuleGraph",
    "SubgraphSequence",
    "tree_rule",
    "grid2d_rule",
    "graph_rule",
    "truncate",
    "ArcSet",
    "HashimotoMatrix",
    "build_arcs",
    "hashimoto",
    "strong_ell_connected",
    "SpectralResult",
    "PowerIterationError",
    "spectral_radius",
    "GrowthEstimate",
    "GraphGrowth",
    "walk_norms",
    "walk_norms_from_vertex",
    "growth_for_graph",
    "Configuration",
    "ClusterLabeling",
    "PercolationEstimate",
    "sample",
    "label_clusters",
    "estimate_tau",
    "estimate_chi",
    "estimate_theta_proxy",
    "exact_tau",
    "exact_chi",
    "exact_reach",
    "exact_theta_proxy",
    "ThresholdBounds",
    "ConnectivityEnvelope",
    "EnvelopeInapplicable",
    "EnvelopeVerification",
    "RhoSequenceReport",
    "DecayFit",
    "threshold_bounds",
    "connectivity_envelope",
    "verify_envelope",
    "rho_sequence",
    "decay_diagnostic",
]
