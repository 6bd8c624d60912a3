import numpy as np
import pytest

from conftest import floyd_warshall
from randmaps.looptree import (
    LoopGraph,
    build_looptree,
    dumps_edge_list,
    loop_diameter,
    loop_distances,
    stable_scaling_samples,
)
from randmaps.tree import PlaneTree, enumerate_plane_trees, heavy_tail_offspring, sample_gw_conditioned, sample_uniform_tree


def brute_loop_edges(tree):
    """The three rules, applied literally to every pair (u, v)."""
    kids = tree.children
    edges = []
    for v in range(tree.n_nodes):
        ks = kids[v]
        for a, b in zip(ks, ks[1:]):
            edges.append((a, b))
        if ks:
            edges.append((ks[0], v))
            edges.append((ks[-1], v))
    return sorted(tuple(sorted(e)) for e in edges)


def edge_multiset(g):
    return sorted(tuple(sorted(e)) for e in g.edges.tolist())


def test_single_vertex():
    g = build_looptree(PlaneTree([-1]))
    assert (g.n_vertices, g.n_edges) == (1, 0)
    assert g.is_connected() and loop_diameter(g) == 0


def test_star_of_three_is_a_four_cycle():
    g = build_looptree(PlaneTree([-1, 0, 0, 0]))
    assert edge_multiset(g) == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert loop_diameter(g) == 2
    assert g.diameter() == 2


def test_path_of_two_edges():
    g = build_looptree(PlaneTree([-1, 0, 1]))
    assert (g.n_vertices, g.n_edges) == (3, 4)
    assert edge_multiset(g) == [(0, 1), (0, 1), (1, 2), (1, 2)]
    assert loop_distances(g, 0).tolist() == [0, 1, 2]


@pytest.mark.parametrize("n", range(0, 8))
def test_invariants_on_all_small_trees(n):
    for tau in enumerate_plane_trees(n):
        g = build_looptree(tau)
        internal = int((tau.child_counts > 0).sum())
        assert g.n_vertices == tau.n_nodes
        assert g.n_edges == tau.n_edges + internal
        # loop decomposition: a vertex with k children closes a loop of length k + 1
        assert g.n_edges == int((tau.child_counts[tau.child_counts > 0] + 1).sum())
        assert g.is_connected()
        assert edge_multiset(g) == brute_loop_edges(tau)
        fw = floyd_warshall(g.n_vertices, g.edges.tolist())
        for s in range(g.n_vertices):
            assert g.distances(s).tolist() == fw[s]
        assert loop_diameter(g) == max(max(row) for row in fw)


def test_diameter_matches_all_sources_on_random_trees():
    rng = np.random.default_rng(40)
    d = heavy_tail_offspring(1.5, 10**3)
    trees = [sample_uniform_tree(int(n), rng) for n in rng.integers(1, 250, size=30)]
    trees += [sample_gw_conditioned(d, int(n), rng) for n in rng.integers(2, 250, size=30)]
    for tau in trees:
        g = build_looptree(tau)
        full = max(int(g.distances(s).max()) for s in range(g.n_vertices))
        assert loop_diameter(g) == full


def test_diameter_of_cycle_graphs():
    # a bare cycle C_k: diameter floor(k / 2)
    for k in range(3, 12):
        edges = np.array([(i, (i + 1) % k) for i in range(k)])
        assert loop_diameter(LoopGraph(k, edges)) == k // 2


def test_stable_scaling_table():
    tab = stable_scaling_samples(1.5, [20, 40], 3, seed=5)
    assert len(tab) == 6
    assert tab["n"].tolist() == [20, 20, 20, 40, 40, 40]
    assert tab["replica"].tolist() == [0, 1, 2, 0, 1, 2]
    again = stable_scaling_samples(1.5, [40], 3, seed=5)
    # replica streams depend only on (seed, n, i)
    assert np.array_equal(again["value"], tab["value"][3:])
    assert (tab["value"] > 0).all()


def test_edge_list_export():
    g = build_looptree(PlaneTree([-1, 0]))
    assert dumps_edge_list(g) in ("1 0\n1 0\n", "0 1\n0 1\n")
    assert len(dumps_edge_list(build_looptree(PlaneTree([-1, 0, 0, 0]))).splitlines()) == 4
