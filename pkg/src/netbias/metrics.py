"""Degree-centrality rankings and group-aware sample quality measures.

Two measures compare a sample's ranking with the full network's ranking:

* top-k bias: minority share among the full network's top k minus the
  minority share among the sample's top k;
* log nCGR: log ratio of a group's cumulative relevance in the two top-k
  lists, where a node's relevance is its inverse rank in the full network
  divided by the rank sum ``N(N+1)/2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, InputError
from .graph import MAJORITY, MINORITY
from .rng import np_rng

EPSILON = 0.001

# Sample-side relevance readings for nCGR.
ORIGINAL_RELEVANCE = "original"
SAMPLE_RELEVANCE = "sample"


@dataclass(frozen=True, eq=False)
class RankedList:
    node_ids: np.ndarray
    centrality: np.ndarray
    labels: np.ndarray
    tie_seed: int

    def __len__(self):
        return len(self.node_ids)

    def top(self, k):
        return self.node_ids[:clamp_k(k, len(self))]


@dataclass(frozen=True, eq=False)
class RelevanceTable:
    """Relevance of every node of the full network, indexed by node id.

    ``inverse_rank[i]`` is ``N - rank_i + 1`` and ``rank_sum`` is
    ``N(N+1)/2``; both are exact integers so group sums can be compared
    without rounding noise.
    """

    inverse_rank: np.ndarray
    rank_sum: int

    @property
    def values(self):
        return self.inverse_rank / self.rank_sum

    def __len__(self):
        return len(self.inverse_rank)


def clamp_k(k, length):
    if k < 1:
        raise InputError("k must be at least 1")
    return min(int(k), int(length))


def rank_by_centrality(graph, tie_seed):
    """Order nodes by decreasing degree, breaking ties by a seeded shuffle.

    ``node_ids`` are the graph's own ids (parent ids for a sample).
    """
    n = graph.n
    if n < 1:
        raise InputError("cannot rank an empty graph")
    deg = np.asarray(graph.degrees)
    perm = np_rng(tie_seed).permutation(n)
    order = perm[np.argsort(-deg[perm], kind="stable")]
    cent = deg[order] / (n - 1) if n > 1 else np.zeros(1)
    ids = np.asarray(graph.node_ids)[order]
    return RankedList(ids, cent, np.asarray(graph.labels)[order], tie_seed)


def top_k_minority_fraction(ranked, k):
    if len(ranked) == 0:
        raise InputError("ranked list is empty")
    kk = clamp_k(k, len(ranked))
    return float(np.count_nonzero(ranked.labels[:kk] == MINORITY) / kk)


def top_k_bias(original, sampled, k):
    """Expected minus observed minority share in the top ``k``.

    Positive values mean the minority is under-represented in the sample.
    """
    return top_k_minority_fraction(original, k) - top_k_minority_fraction(sampled, k)


def relevance(original):
    n = len(original)
    if n == 0:
        raise InputError("ranked list is empty")
    if original.node_ids.min() < 0:
        raise InputError("negative node id")
    size = int(original.node_ids.max()) + 1
    if size != n:
        raise ConsistencyError("relevance needs a ranking over the full node set 0..N-1")
    inv = np.zeros(n, dtype=np.int64)
    inv[original.node_ids] = np.arange(n, 0, -1, dtype=np.int64)
    return RelevanceTable(inv, n * (n + 1) // 2)


def cgr_inverse_rank(ranked, rel, group, k):
    """Integer numerator of ``cgr``: summed inverse ranks of ``group`` in the top ``k``."""
    top = ranked.node_ids[:clamp_k(k, len(ranked))]
    if top.size and (top.min() < 0 or top.max() >= len(rel)):
        raise ConsistencyError("ranked node has no relevance entry")
    mask = ranked.labels[:len(top)] == group
    return int(rel.inverse_rank[top[mask]].sum())


def cgr(ranked, rel, group, k):
    """Cumulative relevance of ``group`` among the first ``k`` entries of ``ranked``.

    Relevance always comes from the full network's table ``rel``.
    """
    return cgr_inverse_rank(ranked, rel, group, k) / rel.rank_sum


def _own_relevance_cgr(ranked, group, k):
    n = len(ranked)
    kk = clamp_k(k, n)
    inv = np.arange(n, n - kk, -1, dtype=np.int64)
    mask = ranked.labels[:kk] == group
    return int(inv[mask].sum()) / (n * (n + 1) // 2)


def log_ncgr(sampled, rel, original, group, k, epsilon=EPSILON, mode=ORIGINAL_RELEVANCE):
    """``ln((CGR_sample + eps) / (CGR_original + eps))`` for one group at rank ``k``.

    ``mode="original"`` scores sampled nodes with their full-network
    relevance. ``mode="sample"`` re-derives relevance from the sample's own
    ranking instead; a perfect sample then does not score zero, which is why
    it is not the default.
    """
    reference = cgr(original, rel, group, k)
    if mode == ORIGINAL_RELEVANCE:
        observed = cgr(sampled, rel, group, k)
    elif mode == SAMPLE_RELEVANCE:
        observed = _own_relevance_cgr(sampled, group, k)
    else:
        raise InputError(f"unknown nCGR mode {mode!r}")
    return math.log((observed + epsilon) / (reference + epsilon))


@dataclass
class MetricRecord:
    method: str
    h: float
    f: float
    n: int
    m: int
    sample_fraction: float
    k: int
    network_seed: int
    sample_seed: int
    bias_topk: float
    log_ncgr_min: float
    log_ncgr_maj: float
    actual_nodes: int
    k_effective: int = 0
    expected_topk: float = float("nan")
    observed_topk: float = float("nan")

    @property
    def ncgr_error(self):
        return abs(self.log_ncgr_min) + abs(self.log_ncgr_maj)


def measure(original, rel, sampled, k, epsilon=EPSILON, mode=ORIGINAL_RELEVANCE):
    """All per-k quantities for one (full ranking, sample ranking) pair."""
    expected = top_k_minority_fraction(original, k)
    observed = top_k_minority_fraction(sampled, k)
    return {
        "k_effective": clamp_k(k, len(sampled)),
        "expected_topk": expected,
        "observed_topk": observed,
        "bias_topk": expected - observed,
        "log_ncgr_min": log_ncgr(sampled, rel, original, MINORITY, k, epsilon, mode),
        "log_ncgr_maj": log_ncgr(sampled, rel, original, MAJORITY, k, epsilon, mode),
    }
