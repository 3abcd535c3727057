"""Node, edge, random-walk and snowball sampling of K nodes.

Every sampler is a pure function of ``(graph, K, seed)``. Node, random-walk
and snowball samples keep the induced edge set; edge sampling keeps only the
edges it drew.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CoverageError, InfeasibleParameterError, InputError, NonTerminationError
from .graph import Provenance, induced_subgraph, partial_subgraph
from .rng import np_rng, py_rng

NODE = "node"
EDGE = "edge"
RANDOM_WALK = "rw"
SNOWBALL = "snowball"
METHODS = (NODE, EDGE, RANDOM_WALK, SNOWBALL)

_ALIASES = {
    "node": NODE, "edge": EDGE, "snowball": SNOWBALL,
    "rw": RANDOM_WALK, "randomwalk": RANDOM_WALK, "random_walk": RANDOM_WALK,
    "random-walk": RANDOM_WALK,
}

DEFAULT_TELEPORT = 0.15
STEP_CAP_PER_NODE = 10_000


def canonical_method(name):
    try:
        return _ALIASES[str(name).lower()]
    except KeyError:
        raise InputError(f"unknown sampling method {name!r}; expected one of {METHODS}") from None


@dataclass(frozen=True)
class SamplerParams:
    method: str
    k: int
    seed: int = 0
    teleport: float = DEFAULT_TELEPORT

    def __post_init__(self):
        object.__setattr__(self, "method", canonical_method(self.method))
        if not 0.0 <= self.teleport < 1.0:
            raise InputError("teleport probability must lie in [0, 1)")
        if self.k < 1:
            raise InfeasibleParameterError("K must be at least 1")


def _check_k(graph, k):
    if k < 1:
        raise InfeasibleParameterError("K must be at least 1")
    if k > graph.n:
        raise InfeasibleParameterError(f"K={k} exceeds the number of nodes N={graph.n}")


def node_sample(graph, k, seed):
    _check_k(graph, k)
    nodes = np_rng(seed).choice(graph.n, size=k, replace=False)
    return induced_subgraph(graph, nodes, Provenance(NODE, k, k, seed))


def edge_sample(graph, k, seed):
    """Draw edges uniformly without replacement until their endpoints cover ``k`` nodes.

    The edge that crosses the threshold is kept even if it brings two new
    nodes, so the sample may hold ``k + 1`` nodes.
    """
    _check_k(graph, k)
    if graph.num_edges == 0:
        raise CoverageError("edge sampling needs at least one edge", reached=0)
    order = np_rng(seed).permutation(graph.num_edges)
    ends = graph.edges[order].ravel()
    nodes, first = np.unique(ends, return_index=True)
    if len(nodes) < k:
        raise CoverageError(
            f"edges exhausted after reaching {len(nodes)} of {k} nodes", reached=len(nodes))
    # index of the edge that introduces each node, sorted by arrival
    arrival = np.sort(first // 2)
    stop = int(arrival[k - 1])
    drawn = graph.edges[order[:stop + 1]]
    chosen = np.unique(drawn.ravel())
    return partial_subgraph(graph, chosen, drawn, Provenance(EDGE, k, len(chosen), seed))


def random_walk_sample(graph, k, seed, teleport=DEFAULT_TELEPORT):
    """Collect every node a teleporting random walker visits until ``k`` are seen.

    The start node and teleport landings count as visited. A walker on a
    node without neighbours always teleports.
    """
    _check_k(graph, k)
    if not 0.0 <= teleport < 1.0:
        raise InputError("teleport probability must lie in [0, 1)")
    rng = py_rng(seed)
    adj = graph.adjacency
    n = graph.n
    cur = rng.randrange(n)
    seen = {cur}
    cap = STEP_CAP_PER_NODE * k
    steps = 0
    while len(seen) < k:
        steps += 1
        if steps > cap:
            raise NonTerminationError(
                f"random walk collected {len(seen)} of {k} nodes within {cap} steps")
        nbrs = adj[cur]
        if not nbrs or rng.random() < teleport:
            cur = rng.randrange(n)
        else:
            cur = nbrs[rng.randrange(len(nbrs))]
        seen.add(cur)
    return induced_subgraph(graph, np.fromiter(seen, np.int64, len(seen)),
                            Provenance(RANDOM_WALK, k, k, seed))


def snowball_sample(graph, k, seed):
    """Two-step snowball waves from fresh random start nodes until ``k`` nodes.

    Within a wave nodes join in BFS discovery order (start, then neighbours,
    then neighbours' neighbours, each list ascending); the last wave is cut
    off once the sample holds exactly ``k`` nodes.
    """
    _check_k(graph, k)
    adj = graph.adjacency
    starts = np_rng(seed).permutation(graph.n).tolist()
    taken = set()
    order = []

    def take(v):
        if v not in taken:
            taken.add(v)
            order.append(v)
        return len(order) >= k

    for s in starts:
        if s in taken:
            continue
        if take(s):
            break
        done = False
        for u in adj[s]:
            if take(u):
                done = True
                break
        if not done:
            for u in adj[s]:
                for w in adj[u]:
                    if take(w):
                        done = True
                        break
                if done:
                    break
        if done:
            break
    return induced_subgraph(graph, order, Provenance(SNOWBALL, k, len(order), seed))


def sample(graph, params):
    """Dispatch on ``params.method``."""
    if params.method == NODE:
        return node_sample(graph, params.k, params.seed)
    if params.method == EDGE:
        return edge_sample(graph, params.k, params.seed)
    if params.method == RANDOM_WALK:
        return random_walk_sample(graph, params.k, params.seed, params.teleport)
    return snowball_sample(graph, params.k, params.seed)
