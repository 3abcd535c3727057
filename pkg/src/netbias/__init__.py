"""Measure how network sampling distorts degree rankings and minority visibility."""

from .errors import (ConsistencyError, CoverageError, DegenerateGraphError,
                     InfeasibleParameterError, InputError, NetbiasError, NonTerminationError,
                     ParseError, SingularMatrixError)
from .graph import (MAJORITY, MINORITY, AttributedGraph, Provenance, SampledGraph,
                    degree_centrality, induced_subgraph, partial_subgraph,
                    same_group_edge_fraction)
from .metrics import (EPSILON, MetricRecord, RankedList, RelevanceTable, cgr, log_ncgr,
                      rank_by_centrality, relevance, top_k_bias, top_k_minority_fraction)
from .netgen import GenParams, generate, group_degree_distribution, grow
from .samplers import (EDGE, METHODS, NODE, RANDOM_WALK, SNOWBALL, SamplerParams, edge_sample,
                       node_sample, random_walk_sample, sample, snowball_sample)
from .stats import build_design_matrix, ols_fit

__version__ = "0.1.0"
