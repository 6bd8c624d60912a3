"""Cori-Vauquelin-Schaeffer bijection between labeled trees and pointed quadrangulations.

Conventions (frozen; the exhaustive round-trip check validates them):

* Corners of the tree are numbered in contour order, corner 0 being the
  root corner. Corner k emits arc k, i.e. half-edges ``2k`` (at the corner's
  vertex) and ``2k+1`` (at its successor, or at the extra vertex).
* Around a tree vertex, corners appear counterclockwise in contour order.
  Inside one corner the arcs are, counterclockwise, the incoming arcs from
  the nearest predecessor corner to the farthest, then the outgoing arc.
* Around the extra vertex the arcs are listed by decreasing corner index.
* The root is half-edge 0 (orientation bit 0, leaving the tree root corner
  towards lower labels) or its twin 1 (bit 1).

The inverse walks each face once: a face corner receives an arc end exactly
when the previous vertex along the face has a smaller distance label. This
picks the two middle corners of a (d, d+1, d, d+1) face and, in a
(d, d+1, d+2, d+1) face, the d+2 corner together with the d+1 corner that
precedes it.
"""

import math
from dataclasses import dataclass

import numpy as np

from randmaps.errors import BijectionViolation, MapValidationError, SizeCapError
from randmaps.maps import RootedMap
from randmaps.tree import (
    LabeledTree,
    PlaneTree,
    catalan,
    corner_sequence,
    enumerate_labeled_trees,
)

INFINITY = math.inf
MAX_VERIFY_EDGES = 4


def successor_indices(corner_labels):
    """Vectorised successor over one period: ``-1`` stands for infinity.

    Returned indices are absolute in the periodic extension, so they lie in
    ``(i, i + 2n)``.
    """
    lab = np.asarray(corner_labels, dtype=np.int64)
    size = len(lab)
    span = 2 * size
    doubled = np.concatenate([lab, lab])
    lo = int(lab.min())
    keys = (doubled - lo + 1) * span + np.arange(span)      # sorted by (label, position)
    order = np.argsort(keys, kind="stable")
    skeys = keys[order]
    query = (lab - lo) * span + np.arange(size)             # label - 1, just after i
    j = np.searchsorted(skeys, query, side="right")
    out = np.full(size, -1, dtype=np.int64)
    found = j < span
    found[found] &= (skeys[j[found]] // span) == (lab[found] - lo)
    out[found] = order[j[found]]
    return out


def successor(i, corners, labels):
    """s(i) = inf{j > i : l(c_j) = l(c_i) - 1} on the periodic corner list.

    ``labels`` are node labels; returns an absolute index or ``INFINITY``.
    """
    size = len(corners)
    corner_labels = np.asarray(labels)[corners.nodes]
    base, offset = divmod(int(i), size)
    s = successor_indices(corner_labels)[offset]
    return INFINITY if s < 0 else int(s) + base * size


def tree_to_quad(lt, orientation_bit=0):
    """Pointed rooted quadrangulation encoded by ``lt`` and the orientation bit."""
    if orientation_bit not in (0, 1):
        raise ValueError("orientation_bit must be 0 or 1")
    n = lt.n_edges
    if n < 1:
        raise ValueError("need a tree with at least one edge")
    n_corners = 2 * n
    corners = corner_sequence(lt.tree)
    node = corners.nodes
    corner_label = lt.label[node]
    succ = successor_indices(corner_label)
    apex = n + 1                                             # the extra vertex
    to_apex = succ < 0
    k = np.arange(n_corners)

    vertex_of = np.empty(2 * n_corners, dtype=np.int64)
    corner_at = np.empty(2 * n_corners, dtype=np.int64)
    within = np.empty(2 * n_corners, dtype=np.int64)
    # outgoing ends
    vertex_of[0::2] = node
    corner_at[0::2] = k
    within[0::2] = n_corners
    # incoming ends
    target = np.where(to_apex, 0, succ % n_corners)
    vertex_of[1::2] = np.where(to_apex, apex, node[target])
    corner_at[1::2] = np.where(to_apex, -k, target)
    within[1::2] = np.where(to_apex, 0, (succ - k) % n_corners)

    order = np.lexsort((within, corner_at, vertex_of))
    grouped = vertex_of[order]
    starts = np.flatnonzero(np.r_[True, grouped[1:] != grouped[:-1]])
    ends = np.r_[starts[1:], len(order)]
    nxt_pos = np.arange(1, len(order) + 1)
    nxt_pos[ends - 1] = starts
    rotation_next = np.empty_like(order)
    rotation_next[order] = order[nxt_pos]
    first = order[starts]
    return RootedMap(vertex_of, rotation_next, root=orientation_bit, pointed_vertex=apex,
                     n_vertices=n + 2, first_half_edge=first, check=False)


def classify_face(labels):
    """Name the label pattern read along one face.

    Returns ``"confusing"`` for a cyclic shift of (d, d+1, d+2, d+1) and
    ``"simple"`` for (d, d+1, d, d+1).
    """
    labels = list(labels)
    if len(labels) != 4:
        raise ValueError("a quadrangle has four corners")
    steps = [labels[(i + 1) % 4] - labels[i] for i in range(4)]
    if any(abs(s) != 1 for s in steps):
        raise ValueError(f"labels {labels} do not change by exactly 1 along the face")
    return "confusing" if len(set(labels)) == 3 else "simple"


def _check_pointed_quadrangulation(q):
    if q.pointed_vertex is None:
        raise MapValidationError("quadrangulation must be pointed")
    if (q.face_degrees != 4).any():
        raise MapValidationError("not a quadrangulation: some face degree differs from 4")
    if q.genus != 0:
        raise MapValidationError("not a plane map")
    if not q.is_bipartite():
        raise MapValidationError("quadrangulation is not bipartite")


def quad_to_tree(q, return_orientation=False):
    """Well-labeled tree of a pointed rooted plane quadrangulation."""
    _check_pointed_quadrangulation(q)
    dist = q.bfs_distances(q.pointed_vertex)
    v_of = q.vertex_of
    n_half = q.n_half_edges
    h = np.arange(n_half)
    # a half-edge goes up if its origin is closer to the pointed vertex
    up = dist[v_of] < dist[v_of[h ^ 1]]
    anchors_by_face = {}
    for g in np.flatnonzero(up).tolist():
        anchors_by_face.setdefault(int(q.face_of[g]), []).append(g ^ 1)   # down half-edge at target
    partner = np.full(n_half, -1, dtype=np.int64)
    for pair in anchors_by_face.values():
        if len(pair) != 2:
            raise MapValidationError("face does not carry exactly one arc")
        a, b = pair
        partner[a], partner[b] = b, a

    # tree rotation: down half-edges around each vertex in counterclockwise order
    nxt = q.rotation_next.tolist()
    is_down = ~up
    next_down = [-1] * n_half
    for g in np.flatnonzero(is_down).tolist():
        x = nxt[g]
        while not is_down[x]:
            x = nxt[x]
        next_down[g] = x

    root_anchor = q.root if is_down[q.root] else q.root ^ 1
    bit = 0 if root_anchor == q.root else 1

    children = []
    labels = []
    root_d = int(dist[v_of[root_anchor]])
    # each stack entry: (tree node id, anchor to start from, anchor to stop at)
    children.append([])
    labels.append(0)
    stack = [(0, root_anchor, root_anchor, True)]
    while stack:
        node, cur, stop, first = stack.pop()
        if not first and cur == stop:
            continue
        child = len(children)
        children.append([])
        children[node].append(child)
        far = int(partner[cur])
        labels.append(int(dist[v_of[far]]) - root_d)
        stack.append((node, next_down[cur], stop, False))
        stack.append((child, next_down[far], far, False))
    tree = PlaneTree.from_children(children)
    # from_children renumbers in preorder; labels follow the same renumbering
    order = _preorder(children)
    lt = LabeledTree(tree, np.asarray(labels, dtype=np.int64)[order])
    return (lt, bit) if return_orientation else lt


def _preorder(children):
    out = []
    stack = [0]
    while stack:
        v = stack.pop()
        out.append(v)
        stack.extend(reversed(children[v]))
    return out


@dataclass
class BijectionReport:
    n_edges: int
    n_labeled_trees: int
    n_pointed_rooted: int
    n_rooted: int
    round_trip_ok: bool

    @property
    def expected_pointed(self):
        return 2 * 3**self.n_edges * catalan(self.n_edges)

    def lines(self):
        return [
            f"n={self.n_edges}: {self.n_labeled_trees} labeled trees, "
            f"{self.n_pointed_rooted} pointed rooted quadrangulations, "
            f"{self.n_rooted} rooted quadrangulations",
        ]


def rooted_quadrangulation_count(n_faces):
    """Tutte's count 2 * 3^n * (2n)! / (n! (n+2)!) of rooted plane quadrangulations."""
    return 2 * 3**n_faces * math.factorial(2 * n_faces) // (
        math.factorial(n_faces) * math.factorial(n_faces + 2))


def verify_two_to_one(n_edges, encode=None):
    """Exhaustive check of the 1-to-2 correspondence for trees with ``n_edges`` edges.

    ``encode`` defaults to :func:`tree_to_quad`; it is a parameter so fault
    injection can exercise the failure path.
    """
    if not 1 <= n_edges <= MAX_VERIFY_EDGES:
        raise SizeCapError(f"n_edges={n_edges} outside 1..{MAX_VERIFY_EDGES}")
    encode = encode or tree_to_quad
    trees = enumerate_labeled_trees(n_edges)
    seen = {}
    rooted = set()
    for lt in trees:
        images = []
        for bit in (0, 1):
            q = encode(lt, bit)
            _check_structure(q, n_edges, (lt, bit))
            code = q.canonical_code()
            if code in seen:
                raise BijectionViolation(
                    f"{lt!r} with bit {bit} and {seen[code][0]!r} with bit {seen[code][1]} "
                    "give the same pointed rooted quadrangulation", witness=(lt, bit))
            seen[code] = (lt, bit)
            rooted.add(q.canonical_code(pointed=False))
            back = quad_to_tree(q)
            if back != lt:
                raise BijectionViolation(f"round trip of {lt!r} (bit {bit}) returned {back!r}",
                                         witness=(lt, bit))
            images.append(q)
        if images[0].reversed_root().canonical_code() != images[1].canonical_code():
            raise BijectionViolation(f"the two images of {lt!r} are not root reversals",
                                     witness=(lt, None))
    report = BijectionReport(n_edges, len(trees), len(seen), len(rooted), True)
    if report.n_pointed_rooted != report.expected_pointed:
        raise BijectionViolation(f"{report.n_pointed_rooted} pointed images, "
                                 f"expected {report.expected_pointed}")
    if report.n_rooted * (n_edges + 2) != report.n_pointed_rooted:
        raise BijectionViolation("rooted images do not all carry n+2 pointings")
    if report.n_rooted != rooted_quadrangulation_count(n_edges):
        raise BijectionViolation(f"{report.n_rooted} rooted quadrangulations, "
                                 f"expected {rooted_quadrangulation_count(n_edges)}")
    return report


def _check_structure(q, n, witness):
    problems = []
    if q.n_vertices != n + 2:
        problems.append(f"V={q.n_vertices}")
    if q.n_edges != 2 * n:
        problems.append(f"E={q.n_edges}")
    if q.n_faces != n:
        problems.append(f"F={q.n_faces}")
    if (q.face_degrees != 4).any():
        problems.append("face degree != 4")
    if q.genus != 0:
        problems.append(f"genus={q.genus}")
    if not q.is_bipartite():
        problems.append("not bipartite")
    if problems:
        raise BijectionViolation(f"{witness}: " + ", ".join(problems), witness=witness)


def label_identity_holds(lt, q):
    """d_q(v, apex) == l(v) - min l + 1 for every tree vertex."""
    dist = q.bfs_distances(q.pointed_vertex)
    expected = lt.label - lt.label.min() + 1
    return bool(np.array_equal(dist[: lt.tree.n_nodes], expected))
