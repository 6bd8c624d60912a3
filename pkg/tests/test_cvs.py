from collections import Counter

import numpy as np
import pytest
from scipy import stats

from conftest import all_rooted_plane_maps, brute_corners
from randmaps.cvs import (
    INFINITY,
    BijectionReport,
    classify_face,
    label_identity_holds,
    quad_to_tree,
    rooted_quadrangulation_count,
    successor,
    successor_indices,
    tree_to_quad,
    verify_two_to_one,
)
from randmaps.errors import BijectionViolation, MapValidationError, SizeCapError
from randmaps.maps import build_map
from randmaps.tree import LabeledTree, PlaneTree, corner_sequence, enumerate_labeled_trees, sample_labeled_tree


def linear_successor(i, corner_labels):
    size = len(corner_labels)
    for j in range(i + 1, i + size):
        if corner_labels[j % size] == corner_labels[i % size] - 1:
            return j
    return INFINITY


# ----------------------------------------------------------- successor

def test_minimum_corner_has_no_successor():
    lt = LabeledTree(PlaneTree([-1, 0]), [0, -1])
    cs = corner_sequence(lt.tree)
    assert successor(1, cs, lt.label) == INFINITY
    assert successor(0, cs, lt.label) == 1
    assert successor(2, cs, lt.label) == 3          # periodic extension


@pytest.mark.parametrize("n", range(1, 5))
def test_successor_matches_linear_scan(n):
    for lt in enumerate_labeled_trees(n):
        corners = brute_corners(lt.tree.parent.tolist())
        lab = lt.label[corners].tolist()
        fast = successor_indices(lab)
        for i in range(2 * n):
            want = linear_successor(i, lab)
            assert (fast[i] if fast[i] >= 0 else INFINITY) == want


# ----------------------------------------------------------- forward map

def test_one_edge_example():
    lt = LabeledTree(PlaneTree([-1, 0]), [0, -1])
    q = tree_to_quad(lt)
    assert (q.n_vertices, q.n_edges, q.n_faces) == (3, 2, 1)
    assert q.face_degrees.tolist() == [4]
    assert q.pointed_vertex == 2


@pytest.mark.parametrize("n", range(1, 4))
def test_structure_and_root_reversal(n):
    for lt in enumerate_labeled_trees(n):
        q0, q1 = tree_to_quad(lt, 0), tree_to_quad(lt, 1)
        for q in (q0, q1):
            assert (q.n_vertices, q.n_edges, q.n_faces, q.genus) == (n + 2, 2 * n, n, 0)
            assert (q.face_degrees == 4).all() and q.is_bipartite()
            assert label_identity_holds(lt, q)
        assert q0.reversed_root().canonical_code() == q1.canonical_code()
        assert q0.canonical_code() != q1.canonical_code()


def test_bad_arguments():
    lt = sample_labeled_tree(3, np.random.default_rng(0))
    with pytest.raises(ValueError):
        tree_to_quad(lt, 2)
    with pytest.raises(ValueError):
        tree_to_quad(LabeledTree(PlaneTree([-1]), [0]))


# ----------------------------------------------------------- faces

def test_classify_face_patterns():
    assert classify_face([3, 4, 5, 4]) == "confusing"
    assert classify_face([5, 4, 3, 4]) == "confusing"
    assert classify_face([2, 3, 2, 3]) == "simple"
    with pytest.raises(ValueError):
        classify_face([1, 2, 3])
    with pytest.raises(ValueError):
        classify_face([1, 1, 2, 2])


@pytest.mark.parametrize("n", range(1, 5))
def test_every_face_has_one_pattern(n):
    kinds = Counter()
    lts = enumerate_labeled_trees(n)
    for lt in lts:
        q = tree_to_quad(lt)
        d = q.bfs_distances(q.pointed_vertex)
        for cycle in q.faces():
            kinds[classify_face(d[q.vertex_of[cycle]].tolist())] += 1
    assert sum(kinds.values()) == n * len(lts)
    assert set(kinds) == {"simple", "confusing"}


# ----------------------------------------------------------- inverse

@pytest.mark.parametrize("n", range(1, 5))
def test_round_trip(n):
    for lt in enumerate_labeled_trees(n):
        for bit in (0, 1):
            back, b = quad_to_tree(tree_to_quad(lt, bit), return_orientation=True)
            assert back == lt and b == bit


def test_round_trip_large():
    rng = np.random.default_rng(31)
    for n in (50, 1000, 20000):
        lt = sample_labeled_tree(n, rng)
        back = quad_to_tree(tree_to_quad(lt, int(rng.integers(2))))
        assert back == lt
        assert back.tree.n_edges == n


def test_inverse_spans_all_but_apex():
    lt = sample_labeled_tree(200, np.random.default_rng(32))
    q = tree_to_quad(lt)
    back = quad_to_tree(q)
    assert back.tree.n_nodes == q.n_vertices - 1
    assert back.tree.n_edges == q.n_faces


def test_inverse_rejects_invalid_input():
    square = build_map([[0, 7], [1, 2], [3, 4], [5, 6]])
    with pytest.raises(MapValidationError):
        quad_to_tree(square)                                         # not pointed
    with pytest.raises(MapValidationError):
        quad_to_tree(build_map([[0, 5], [1, 2], [3, 4]], pointed_vertex=0))   # triangle
    hexagon = build_map([[0, 11], [1, 2], [3, 4], [5, 6], [7, 8], [9, 10]], pointed_vertex=0)
    with pytest.raises(MapValidationError):
        quad_to_tree(hexagon)


def test_four_cycle_inverse():
    # the 4-cycle is a 2-face quadrangulation; pointed at 0 it encodes a 2-edge tree
    square = build_map([[0, 7], [1, 2], [3, 4], [5, 6]], root=0, pointed_vertex=0)
    lt, bit = quad_to_tree(square, return_orientation=True)
    assert lt.tree.n_edges == 2
    # the root leaves the pointed vertex, so it is the reversed arc
    assert bit == 1
    assert tree_to_quad(lt, bit).canonical_code() == square.canonical_code()


# ----------------------------------------------------------- counting

def test_tutte_counts():
    assert [rooted_quadrangulation_count(n) for n in (1, 2, 3, 4)] == [2, 9, 54, 378]


@pytest.mark.parametrize("n,trees,pointed,rooted", [(1, 3, 6, 2), (2, 18, 36, 9), (3, 135, 270, 54)])
def test_verify_two_to_one(n, trees, pointed, rooted):
    rep = verify_two_to_one(n)
    assert isinstance(rep, BijectionReport)
    assert (rep.n_labeled_trees, rep.n_pointed_rooted, rep.n_rooted) == (trees, pointed, rooted)
    assert rep.n_rooted * (n + 2) == rep.n_pointed_rooted == rep.expected_pointed
    assert rep.round_trip_ok
    assert f"{trees} labeled trees" in rep.lines()[0]


def test_verify_caps():
    for n in (0, 5):
        with pytest.raises(SizeCapError):
            verify_two_to_one(n)


def test_verify_reports_injected_faults():
    with pytest.raises(BijectionViolation) as info:
        verify_two_to_one(2, encode=lambda lt, bit: tree_to_quad(lt, 0))
    assert info.value.witness is not None

    # rooting at the arc of corner 1 instead of corner 0 breaks the round trip
    with pytest.raises(BijectionViolation):
        verify_two_to_one(2, encode=lambda lt, bit: tree_to_quad(lt, bit).with_root(2 + bit))


def test_images_cover_every_rooted_quadrangulation():
    # brute force: every rooted plane map with 2n edges; keep the quadrangulations
    for n in (1, 2):
        quads = [m for m in all_rooted_plane_maps(2 * n) if (m.face_degrees == 4).all()]
        brute = {m.canonical_code(pointed=False) for m in quads}
        images = {tree_to_quad(lt, bit).canonical_code(pointed=False)
                  for lt in enumerate_labeled_trees(n) for bit in (0, 1)}
        assert images == brute
        assert len(brute) == rooted_quadrangulation_count(n)


def test_uniform_pointed_rooted_quadrangulations():
    rng = np.random.default_rng(33)
    codes = {}
    counts = Counter()
    draws = 36 * 300
    for _ in range(draws):
        q = tree_to_quad(sample_labeled_tree(2, rng), int(rng.integers(2)))
        counts[codes.setdefault(q.canonical_code(), len(codes))] += 1
    assert len(counts) == 36
    assert stats.chisquare(list(counts.values())).pvalue > 1e-3


def test_label_identity_random():
    rng = np.random.default_rng(34)
    for n in (10, 100, 1000):
        for _ in range(5):
            lt = sample_labeled_tree(n, rng)
            assert label_identity_holds(lt, tree_to_quad(lt, int(rng.integers(2))))
