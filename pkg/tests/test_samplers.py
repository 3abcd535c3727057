import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs, make_graph, random_graph
from netbias.errors import (CoverageError, InfeasibleParameterError, InputError,
                            NonTerminationError)
from netbias.graph import MINORITY, induced_subgraph
from netbias.samplers import (EDGE, METHODS, NODE, RANDOM_WALK, SNOWBALL, SamplerParams,
                              edge_sample, node_sample, random_walk_sample, sample,
                              snowball_sample)


def edges_of(sg):
    return {tuple(e) for e in sg.edges.tolist()}


@pytest.fixture(scope="module")
def medium():
    return random_graph(np.random.default_rng(0), 120, 0.06)


class TestNodeSample:
    def test_full_size_is_identity(self, star):
        sg = node_sample(star, 4, seed=1)
        assert sg.node_ids.tolist() == [0, 1, 2, 3] and edges_of(sg) == edges_of(star)

    def test_single_node(self, star):
        sg = node_sample(star, 1, seed=1)
        assert sg.n == 1 and sg.num_edges == 0

    def test_k_above_n(self, star):
        with pytest.raises(InfeasibleParameterError):
            node_sample(star, 5, seed=0)

    def test_minority_share_is_unbiased(self):
        labels = [MINORITY] * 20 + [0] * 80
        g = make_graph(100, [], labels)
        shares = [np.mean(node_sample(g, 10, seed=s).labels == MINORITY) for s in range(10_000)]
        # binomial-type expectation: E[share] = 0.2 exactly
        assert np.mean(shares) == pytest.approx(0.2, abs=0.01)


class TestEdgeSample:
    def test_star_three_nodes(self, star):
        # any two distinct star edges cover the centre and two leaves
        for seed in range(50):
            sg = edge_sample(star, 3, seed)
            assert sg.num_edges == 2 and sg.n == 3 and 0 in sg.node_ids

    def test_triangle_is_not_induced(self, triangle):
        for seed in range(50):
            sg = edge_sample(triangle, 3, seed)
            assert sg.n == 3 and sg.num_edges == 2

    def test_two_nodes_need_one_edge(self, medium):
        for seed in range(20):
            sg = edge_sample(medium, 2, seed)
            assert sg.n == 2 and sg.num_edges == 1

    def test_overshoot_at_most_one(self, two_triangles):
        # drawing an edge of the second triangle after covering one adds two nodes at once
        sizes = {edge_sample(two_triangles, 4, s).n for s in range(200)}
        assert sizes == {4, 5}
        over = next(edge_sample(two_triangles, 4, s) for s in range(200)
                    if edge_sample(two_triangles, 4, s).n == 5)
        assert over.provenance.actual_nodes == 5 and over.provenance.requested_k == 4

    def test_coverage_error(self):
        g = make_graph(5, [(0, 1), (1, 2)])
        with pytest.raises(CoverageError) as err:
            edge_sample(g, 4, seed=0)
        assert err.value.reached == 3

    def test_edgeless(self):
        with pytest.raises(CoverageError):
            edge_sample(make_graph(3, []), 2, 0)


class TestRandomWalk:
    def test_full_connected_graph(self, star):
        sg = random_walk_sample(star, 4, seed=3)
        assert edges_of(sg) == edges_of(star)

    def test_teleport_bridges_components(self, two_triangles):
        for seed in range(30):
            assert random_walk_sample(two_triangles, 6, seed, teleport=0.15).n == 6

    def test_without_teleport_cannot_leave_component(self, two_triangles):
        with pytest.raises(NonTerminationError):
            random_walk_sample(two_triangles, 4, seed=0, teleport=0.0)

    def test_without_teleport_small_k_within_one_component(self, two_triangles):
        for seed in range(30):
            ids = random_walk_sample(two_triangles, 3, seed, teleport=0.0).node_ids
            assert set(ids) in ({0, 1, 2}, {3, 4, 5})

    def test_isolated_nodes_force_teleport(self):
        g = make_graph(4, [])
        assert random_walk_sample(g, 4, seed=0, teleport=0.0).n == 4

    def test_bad_teleport(self, star):
        with pytest.raises(InputError):
            random_walk_sample(star, 2, 0, teleport=1.0)


class TestSnowball:
    def test_star_any_start(self, star):
        starts = set()
        for seed in range(40):
            sg = snowball_sample(star, 4, seed)
            assert sg.node_ids.tolist() == [0, 1, 2, 3]
        # also check from each possible start: a leaf reaches the other leaves in two hops
        for s in range(4):
            hop1 = set(star.adjacency[s])
            hop2 = {w for u in hop1 for w in star.adjacency[u]}
            starts.add(frozenset({s} | hop1 | hop2))
        assert starts == {frozenset(range(4))}

    def test_full_graph(self, medium):
        assert snowball_sample(medium, medium.n, 4).n == medium.n

    def test_two_triangles_need_two_waves(self, two_triangles):
        # a triangle's two-hop closure is only itself, so 6 nodes need both triangles
        sg = snowball_sample(two_triangles, 6, 0)
        assert sg.n == 6 and sg.num_edges == 6

    def test_truncates_in_discovery_order(self):
        # path 0-1-2-3-4 plus a pendant 5 on 1; start at 0 gives 0, 1, then 2, 5
        g = make_graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5)])
        for seed in range(200):
            starts = np.random.default_rng(seed).permutation(6)
            if starts[0] == 0:
                assert snowball_sample(g, 3, seed).node_ids.tolist() == [0, 1, 2]
                break
        else:
            pytest.fail("no seed started at node 0")


@pytest.mark.parametrize("method", METHODS)
def test_dispatch_and_determinism(method, medium):
    p = SamplerParams(method, 30, seed=9)
    a, b = sample(medium, p), sample(medium, p)
    assert np.array_equal(a.node_ids, b.node_ids) and edges_of(a) == edges_of(b)
    assert a.provenance.method == method
    assert a.n in ((30, 31) if method == EDGE else (30,))


def test_method_aliases():
    assert SamplerParams("random-walk", 3).method == RANDOM_WALK
    with pytest.raises(InputError):
        SamplerParams("forest-fire", 3)


@settings(max_examples=40, deadline=None)
@given(graphs(min_nodes=3), st.integers(0, 2**32), st.sampled_from([NODE, RANDOM_WALK, SNOWBALL]),
       st.data())
def test_induced_closure(g, seed, method, data):
    k = data.draw(st.integers(1, g.n))
    sg = sample(g, SamplerParams(method, k, seed))
    assert sg.n == k
    assert set(sg.node_ids.tolist()) <= set(range(g.n))
    assert edges_of(sg) == edges_of(induced_subgraph(g, sg.node_ids))


@settings(max_examples=40, deadline=None)
@given(graphs(min_nodes=3), st.integers(0, 2**32), st.data())
def test_edge_sample_subset_of_induced(g, seed, data):
    reachable = len(np.unique(g.edges))
    if reachable < 1:
        return
    k = data.draw(st.integers(1, reachable))
    sg = edge_sample(g, k, seed)
    assert sg.n in (k, k + 1)
    assert edges_of(sg) <= edges_of(induced_subgraph(g, sg.node_ids))
    assert set(np.unique(sg.edges).tolist()) == set(sg.node_ids.tolist())
