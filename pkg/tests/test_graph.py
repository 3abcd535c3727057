import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs, make_graph
from netbias.errors import DegenerateGraphError, InputError
from netbias.graph import (MAJORITY, MINORITY, AttributedGraph, degree_centrality,
                           induced_subgraph, partial_subgraph, same_group_edge_fraction)


def edge_set(g):
    return {tuple(e) for e in g.edges.tolist()}


class TestConstruction:
    def test_rejects_self_loop(self):
        with pytest.raises(InputError):
            make_graph(3, [(1, 1)])

    def test_rejects_duplicate_in_either_direction(self):
        with pytest.raises(InputError):
            make_graph(3, [(0, 1), (1, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(InputError):
            make_graph(3, [(0, 3)])

    def test_label_length_checked(self):
        with pytest.raises(InputError):
            AttributedGraph.from_edges(3, [(0, 1)], [0, 1])

    def test_adjacency_symmetric_and_sorted(self, star):
        adj = star.adjacency
        assert adj[0] == [1, 2, 3]
        assert all(adj[v] == [0] for v in (1, 2, 3))

    def test_arrays_read_only(self, triangle):
        with pytest.raises(ValueError):
            triangle.edges[0, 0] = 2


class TestDegreeCentrality:
    def test_triangle(self, triangle):
        assert degree_centrality(triangle).tolist() == [1.0, 1.0, 1.0]

    def test_star(self, star):
        # centre touches all 3 others; leaves touch 1 of 3
        np.testing.assert_allclose(degree_centrality(star), [1.0, 1 / 3, 1 / 3, 1 / 3])

    def test_isolated_node(self):
        g = make_graph(5, [(0, 1), (1, 2), (2, 3)])
        assert degree_centrality(g)[4] == 0.0

    def test_single_node_is_degenerate(self):
        with pytest.raises(DegenerateGraphError):
            degree_centrality(make_graph(1, []))

    def test_sample_uses_own_node_count(self, star):
        sg = induced_subgraph(star, [0, 1, 2])
        np.testing.assert_allclose(degree_centrality(sg), [1.0, 0.5, 0.5])


class TestSubgraphs:
    def test_induced_full_set_is_identity(self, star):
        assert edge_set(induced_subgraph(star, range(4))) == edge_set(star)

    def test_induced_two_star_leaves_has_no_edges(self, star):
        assert induced_subgraph(star, [1, 2]).num_edges == 0

    def test_induced_two_triangle_nodes(self, triangle):
        assert induced_subgraph(triangle, [0, 2]).num_edges == 1

    def test_induced_unknown_node(self, triangle):
        with pytest.raises(InputError):
            induced_subgraph(triangle, [0, 7])

    def test_labels_carried(self):
        g = make_graph(3, [(0, 1)], [MINORITY, MAJORITY, MINORITY])
        assert induced_subgraph(g, [0, 2]).labels.tolist() == [MINORITY, MINORITY]

    def test_partial_keeps_only_given_edges(self, triangle):
        sg = partial_subgraph(triangle, [0, 1, 2], [(0, 1)])
        assert sg.degrees.tolist() == [1, 1, 0]

    def test_partial_empty_edges(self, triangle):
        sg = partial_subgraph(triangle, [0, 1, 2], [])
        assert sg.n == 3 and sg.num_edges == 0

    def test_partial_with_all_induced_edges_matches_induced(self, triangle):
        a = partial_subgraph(triangle, [0, 1, 2], triangle.edges)
        b = induced_subgraph(triangle, [0, 1, 2])
        assert edge_set(a) == edge_set(b)

    def test_partial_edge_outside_nodes(self, triangle):
        with pytest.raises(InputError):
            partial_subgraph(triangle, [0, 1], [(1, 2)])

    def test_partial_edge_not_in_parent(self, star):
        with pytest.raises(InputError):
            partial_subgraph(star, [1, 2], [(1, 2)])

    def test_to_graph_relabels(self, star):
        g = induced_subgraph(star, [0, 3]).to_graph()
        assert g.n == 2 and edge_set(g) == {(0, 1)}


class TestSameGroupFraction:
    def test_all_same(self, triangle):
        assert same_group_edge_fraction(triangle) == 1.0

    def test_bipartite(self):
        g = make_graph(4, [(0, 2), (0, 3), (1, 2), (1, 3)], [1, 1, 0, 0])
        assert same_group_edge_fraction(g) == 0.0

    def test_triangle_two_minorities(self):
        g = make_graph(3, [(0, 1), (1, 2), (0, 2)], [MINORITY, MINORITY, MAJORITY])
        # of 3 edges only (0, 1) joins equal labels
        assert same_group_edge_fraction(g) == pytest.approx(1 / 3)

    def test_edgeless(self):
        with pytest.raises(DegenerateGraphError):
            same_group_edge_fraction(make_graph(3, []))


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_handshake(g):
    assert g.degrees.sum() == 2 * g.num_edges


@settings(max_examples=60, deadline=None)
@given(graphs(), st.data())
def test_induced_idempotent_and_partial_subset(g, data):
    nodes = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    once = induced_subgraph(g, nodes)
    twice = induced_subgraph(once.to_graph(), range(once.n))
    assert len(twice.edges) == len(once.edges)
    again = induced_subgraph(g, once.node_ids)
    assert edge_set(again) == edge_set(once)
    if once.num_edges:
        keep = data.draw(st.lists(st.sampled_from(once.edges.tolist()), unique_by=tuple))
        part = partial_subgraph(g, nodes, keep)
        assert edge_set(part) <= edge_set(once)


@settings(max_examples=60, deadline=None)
@given(graphs(), st.randoms(use_true_random=False))
def test_centrality_invariant_under_relabeling(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    perm = np.array(perm)
    labels = np.empty(g.n, dtype=int)
    labels[perm] = g.labels
    relabeled = AttributedGraph.from_edges(g.n, perm[g.edges], labels)
    np.testing.assert_array_equal(degree_centrality(relabeled)[perm], degree_centrality(g))
