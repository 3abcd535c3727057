"""Undirected simple graphs with a binary group label per node.

Node ids are dense integers ``0..n-1``. Edges are stored once, as ``(u, v)``
with ``u < v``, lexicographically sorted, which makes equality and hashing of
edge sets cheap. Label ``MINORITY`` is 1 and ``MAJORITY`` is 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateGraphError, InputError

MAJORITY = 0
MINORITY = 1
GROUP_NAMES = {MAJORITY: "majority", MINORITY: "minority"}


def _frozen(a):
    a.setflags(write=False)
    return a


def canonical_edges(edges, n=None):
    """Return edges as a sorted ``(E, 2)`` int64 array with ``u < v``.

    Raises ``InputError`` on self-loops, duplicates or ids outside ``0..n-1``.
    """
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    arr = arr.reshape(-1, 2)
    if n is not None and (arr.min() < 0 or arr.max() >= n):
        raise InputError(f"edge endpoint outside node range 0..{n - 1}")
    if np.any(arr[:, 0] == arr[:, 1]):
        raise InputError("self-loops are not allowed")
    arr = np.sort(arr, axis=1)
    order = np.lexsort((arr[:, 1], arr[:, 0]))
    arr = arr[order]
    if len(arr) > 1 and np.any(np.all(arr[1:] == arr[:-1], axis=1)):
        raise InputError("duplicate edges are not allowed")
    return np.ascontiguousarray(arr)


def _degrees(n, edges):
    return np.bincount(edges.ravel(), minlength=n).astype(np.int64)


@dataclass(frozen=True, eq=False)
class AttributedGraph:
    """Immutable undirected simple graph with binary node labels."""

    n: int
    edges: np.ndarray
    labels: np.ndarray

    @classmethod
    def from_edges(cls, n, edges, labels):
        n = int(n)
        if n < 1:
            raise InputError("graph needs at least one node")
        labels = np.asarray(labels, dtype=np.int8).copy()
        if labels.shape != (n,):
            raise InputError(f"expected {n} labels, got {labels.size}")
        if not np.isin(labels, (MAJORITY, MINORITY)).all():
            raise InputError("labels must be 0 (majority) or 1 (minority)")
        edges = canonical_edges(edges, n)
        return cls(n, _frozen(edges), _frozen(labels))

    @property
    def num_edges(self):
        return len(self.edges)

    @property
    def node_ids(self):
        return np.arange(self.n, dtype=np.int64)

    @cached_property
    def degrees(self):
        return _frozen(_degrees(self.n, self.edges))

    @cached_property
    def indptr(self):
        return _frozen(np.concatenate(([0], np.cumsum(self.degrees))))

    @cached_property
    def indices(self):
        # both directions, grouped by source, ascending neighbor id within a row
        both = np.concatenate((self.edges, self.edges[:, ::-1]))
        order = np.lexsort((both[:, 1], both[:, 0]))
        return _frozen(both[order, 1].copy())

    @cached_property
    def adjacency(self):
        """Neighbor lists as plain Python lists, for tight sampling loops."""
        ptr = self.indptr.tolist()
        idx = self.indices.tolist()
        return tuple(idx[ptr[i]:ptr[i + 1]] for i in range(self.n))

    def neighbors(self, v):
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def group_sizes(self):
        minority = int(np.count_nonzero(self.labels == MINORITY))
        return {MINORITY: minority, MAJORITY: self.n - minority}

    def label_of(self, ids):
        return self.labels[np.asarray(ids, dtype=np.int64)]


@dataclass(frozen=True, eq=False)
class Provenance:
    method: str
    requested_k: int
    actual_nodes: int
    seed: int | None = None


@dataclass(frozen=True, eq=False)
class SampledGraph:
    """A node subset of a parent graph with a subset of its edges.

    ``node_ids`` are parent ids in ascending order; ``labels`` is aligned with
    ``node_ids``; ``edges`` are expressed in parent ids.
    """

    node_ids: np.ndarray
    edges: np.ndarray
    labels: np.ndarray
    provenance: Provenance

    @property
    def n(self):
        return len(self.node_ids)

    @property
    def num_edges(self):
        return len(self.edges)

    def local_index(self, ids):
        ids = np.asarray(ids, dtype=np.int64)
        pos = np.searchsorted(self.node_ids, ids)
        pos_c = np.minimum(pos, max(self.n - 1, 0))
        if self.n == 0 or np.any(self.node_ids[pos_c] != ids):
            raise InputError("node id not in sample")
        return pos

    @cached_property
    def degrees(self):
        """Degrees within the sample, aligned with ``node_ids``."""
        if self.num_edges == 0:
            return _frozen(np.zeros(self.n, dtype=np.int64))
        return _frozen(_degrees(self.n, self.local_index(self.edges)))

    def label_of(self, ids):
        return self.labels[self.local_index(ids)]

    def to_graph(self):
        """Relabel to a standalone ``AttributedGraph`` with ids ``0..n-1``."""
        local = self.local_index(self.edges) if self.num_edges else np.empty((0, 2), np.int64)
        return AttributedGraph.from_edges(self.n, local, self.labels)


def degree_centrality(graph):
    """Degree divided by ``n - 1`` for every node of ``graph``.

    Works on both ``AttributedGraph`` and ``SampledGraph``; a sample uses its
    own node count as ``n``. The result is aligned with ``graph.node_ids``.
    """
    if graph.n < 2:
        raise DegenerateGraphError("degree centrality needs at least 2 nodes")
    return graph.degrees / (graph.n - 1)


def _as_node_array(graph, nodes):
    arr = np.unique(np.asarray(list(nodes) if not isinstance(nodes, np.ndarray) else nodes,
                               dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= graph.n):
        raise InputError(f"unknown node id (graph has nodes 0..{graph.n - 1})")
    return arr


def _make_sample(graph, node_arr, edges, provenance):
    if provenance is None:
        provenance = Provenance("induced", len(node_arr), len(node_arr))
    return SampledGraph(_frozen(node_arr), _frozen(edges),
                        _frozen(graph.labels[node_arr].copy()), provenance)


def induced_subgraph(graph, nodes, provenance=None):
    """Keep ``nodes`` and every edge of ``graph`` with both endpoints among them."""
    node_arr = _as_node_array(graph, nodes)
    mask = np.zeros(graph.n, dtype=bool)
    mask[node_arr] = True
    keep = mask[graph.edges[:, 0]] & mask[graph.edges[:, 1]]
    return _make_sample(graph, node_arr, graph.edges[keep].copy(), provenance)


def _edge_keys(edges, n):
    return edges[:, 0] * np.int64(n) + edges[:, 1]


def partial_subgraph(graph, nodes, edges, provenance=None):
    """Keep ``nodes`` and exactly the given ``edges`` (a subset of the graph's edges)."""
    node_arr = _as_node_array(graph, nodes)
    edge_arr = canonical_edges(edges, graph.n)
    if len(edge_arr):
        mask = np.zeros(graph.n, dtype=bool)
        mask[node_arr] = True
        if not (mask[edge_arr[:, 0]] & mask[edge_arr[:, 1]]).all():
            raise InputError("edge endpoint outside the selected node set")
        keys = _edge_keys(edge_arr, graph.n)
        known = _edge_keys(graph.edges, graph.n)
        pos = np.minimum(np.searchsorted(known, keys), max(len(known) - 1, 0))
        if len(known) == 0 or np.any(known[pos] != keys):
            raise InputError("edge not present in the parent graph")
    return _make_sample(graph, node_arr, edge_arr, provenance)


def same_group_edge_fraction(graph):
    """Share of edges whose two endpoints carry the same label."""
    if graph.num_edges == 0:
        raise DegenerateGraphError("same-group edge fraction is undefined without edges")
    ends = graph.label_of(graph.edges)
    return float(np.count_nonzero(ends[:, 0] == ends[:, 1]) / graph.num_edges)
