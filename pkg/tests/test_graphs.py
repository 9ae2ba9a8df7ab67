import math

import numpy as np
import pytest

from blindcent.errors import NotConnectedError
from blindcent.graphs import (
    Graph,
    adjacency,
    eigenvector_centrality,
    erdos_renyi,
    is_connected,
    read_edge_list,
    watts_strogatz,
    write_edge_list,
)

P3 = Graph.from_edges(3, [(0, 1), (1, 2)])


def degrees(g: Graph) -> list[int]:
    return [len(nbrs) for nbrs in g.neighbors()]


class TestGraphType:
    def test_rejects_out_of_range_edge(self):
        with pytest.raises(ValueError):
            Graph(n=3, edges=frozenset({(0, 3)}))

    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            Graph(n=3, edges=frozenset({(1, 1)}))

    def test_rejects_empty_graph(self):
        with pytest.raises(ValueError):
            Graph(n=0)

    def test_from_edges_normalizes_order(self):
        g = Graph.from_edges(3, [(2, 0), (1, 0)])
        assert g.edges == frozenset({(0, 2), (0, 1)})


class TestAdjacency:
    def test_path_graph(self):
        np.testing.assert_array_equal(
            adjacency(P3), [[0, 1, 0], [1, 0, 1], [0, 1, 0]]
        )

    def test_empty_graph(self):
        np.testing.assert_array_equal(adjacency(Graph(n=2)), np.zeros((2, 2)))

    def test_complete_graph(self):
        k3 = Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)])
        np.testing.assert_array_equal(adjacency(k3), np.ones((3, 3)) - np.eye(3))


class TestErdosRenyi:
    def test_p_zero_is_empty(self):
        assert erdos_renyi(5, 0.0, 1).edge_count == 0

    def test_p_one_is_complete(self):
        assert erdos_renyi(5, 1.0, 1).edge_count == 10

    def test_edge_count_near_binomial_mean(self):
        # binomial arithmetic: mean = p*C(100,2), sd = sqrt(C(100,2)*p*(1-p))
        n = 100
        p = math.log(n) / n
        pairs = n * (n - 1) // 2
        mean = p * pairs
        sd = math.sqrt(pairs * p * (1 - p))
        count = erdos_renyi(n, p, 12345).edge_count
        assert abs(count - mean) < 4 * sd

    def test_reproducible_per_seed(self):
        assert erdos_renyi(30, 0.3, 9).edges == erdos_renyi(30, 0.3, 9).edges

    def test_rejects_bad_p(self):
        with pytest.raises(ValueError):
            erdos_renyi(5, 1.5, 0)


class TestWattsStrogatz:
    def test_p_zero_is_regular(self):
        g = watts_strogatz(500, 4, 0.0, 0)
        assert degrees(g) == [4] * 500

    def test_small_ring_is_cycle(self):
        g = watts_strogatz(6, 2, 0.0, 0)
        assert g.edges == frozenset({(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)})

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_full_rewiring_preserves_edge_count(self, seed):
        # construction oracle: every rewire removes one edge and adds one
        g = watts_strogatz(500, 4, 1.0, seed)
        assert g.edge_count == 1000
        assert len(set(degrees(g))) > 1  # degrees vary once rewired

    def test_rejects_odd_k(self):
        with pytest.raises(ValueError):
            watts_strogatz(10, 3, 0.1, 0)

    def test_rejects_k_not_below_n(self):
        with pytest.raises(ValueError):
            watts_strogatz(4, 4, 0.1, 0)

    def test_reproducible_per_seed(self):
        assert watts_strogatz(60, 4, 0.4, 5).edges == watts_strogatz(60, 4, 0.4, 5).edges


class TestIsConnected:
    def test_path(self):
        assert is_connected(P3)

    def test_two_isolated_nodes(self):
        assert not is_connected(Graph(n=2))

    def test_cycle(self):
        assert is_connected(watts_strogatz(6, 2, 0.0, 0))

    def test_single_node(self):
        assert is_connected(Graph(n=1))


class TestEigenvectorCentrality:
    def test_path_graph_closed_form(self):
        # A v = sqrt(2) v for v = (1, sqrt(2), 1)/2; checked analytically
        u = eigenvector_centrality(adjacency(P3))
        expected = np.array([0.5, math.sqrt(0.5), 0.5])
        np.testing.assert_allclose(u, expected, atol=1e-10)
        np.testing.assert_allclose(adjacency(P3) @ u, math.sqrt(2) * u, atol=1e-10)

    def test_cycle_is_constant(self):
        u = eigenvector_centrality(adjacency(watts_strogatz(6, 2, 0.0, 0)))
        np.testing.assert_allclose(u, np.full(6, 1 / math.sqrt(6)), atol=1e-8)

    def test_ring_lattice_constant(self):
        u = eigenvector_centrality(adjacency(watts_strogatz(500, 4, 0.0, 0)))
        np.testing.assert_allclose(u, np.full(500, 1 / math.sqrt(500)), atol=1e-8)

    def test_disconnected_raises(self):
        with pytest.raises(NotConnectedError):
            eigenvector_centrality(np.zeros((2, 2)))

    def test_positive_entries_on_connected_graphs(self):
        for seed in range(5):
            g = erdos_renyi(20, 0.3, seed)
            if not is_connected(g):
                continue
            u = eigenvector_centrality(adjacency(g))
            assert u.min() > 0

    def test_relabeling_equivariance(self):
        rng = np.random.default_rng(3)
        g = erdos_renyi(12, 0.5, 7)
        assert is_connected(g)
        perm = rng.permutation(12)
        relabeled = Graph.from_edges(
            12, [(int(perm[i]), int(perm[j])) for i, j in g.edges]
        )
        u = eigenvector_centrality(adjacency(g))
        v = eigenvector_centrality(adjacency(relabeled))
        np.testing.assert_allclose(v[perm], u, atol=1e-9)

    def test_single_node(self):
        np.testing.assert_array_equal(eigenvector_centrality(np.zeros((1, 1))), [1.0])


class TestEdgeListFile:
    def test_round_trip(self, tmp_path):
        g = erdos_renyi(20, 0.3, 4)
        path = tmp_path / "graph.edges"
        write_edge_list(g, path)
        back = read_edge_list(path)
        assert back.n == g.n and back.edges == g.edges

    def test_header_format(self, tmp_path):
        path = tmp_path / "graph.edges"
        write_edge_list(P3, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "# n=3"
        assert lines[1:] == ["0,1", "1,2"]

    def test_missing_header_rejected(self, tmp_path):
        path = tmp_path / "bad.edges"
        path.write_text("0,1\n")
        with pytest.raises(ValueError):
            read_edge_list(path)
