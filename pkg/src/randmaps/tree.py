"""Plane trees and well-labeled trees.

A :class:`PlaneTree` is stored as a parent array in depth-first preorder, so
node ``0`` is the root, ``parent[v] < v`` for every other node, and the
children of a node are listed by increasing id. This one array fixes the
plane structure; the contour (Dyck) word, depths and corner sequence are
derived from it on demand and cached.

Contour convention: the walk around the tree is the depth-first traversal
visiting children in stored order. Every module in the package uses this as
the "clockwise" contour.
"""

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from randmaps.errors import (
    InfeasibleConditioningError,
    RetryLimitError,
    SizeCapError,
    TreeOverflowError,
)

MAX_ENUMERATE_EDGES = 8
MAX_ENUMERATE_LABELED_EDGES = 5


class EmptyContourError(ValueError):
    """The tree has no edge, hence no corner sequence to speak of."""


class PlaneTree:
    """Rooted plane tree given by its preorder parent array."""

    def __init__(self, parent, *, _dyck=None, _check=True):
        parent = np.array(parent, dtype=np.int64)
        if parent.ndim != 1 or len(parent) == 0:
            raise ValueError("parent array must be a non-empty 1-d sequence")
        if _check:
            _check_preorder(parent)
        self.parent = parent
        self.parent.setflags(write=False)
        if _dyck is not None:
            self.__dict__["dyck"] = _dyck

    @classmethod
    def from_children(cls, children, root=0):
        """Build from per-node ordered children lists (any node ids)."""
        order = []
        stack = [root]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(reversed(children[v]))
        if len(order) != len(children):
            raise ValueError("children lists do not describe a single tree rooted at %r" % root)
        rank = {v: i for i, v in enumerate(order)}
        parent = np.full(len(order), -1, dtype=np.int64)
        for v in order:
            for c in children[v]:
                parent[rank[c]] = rank[v]
        return cls(parent)

    @classmethod
    def from_dyck(cls, steps):
        """Build from a Dyck word of +1 (away from root) / -1 steps."""
        steps = np.asarray(steps, dtype=np.int8)
        if steps.size and (np.cumsum(steps).min() < 0 or steps.sum() != 0):
            raise ValueError("not a Dyck word")
        parent = _parent_from_dyck(steps)
        return cls(parent, _dyck=steps, _check=False)

    @classmethod
    def from_lukasiewicz(cls, counts):
        """Build from child counts listed in preorder."""
        counts = np.asarray(counts, dtype=np.int64)
        n = len(counts)
        walk = np.cumsum(counts - 1)
        if n == 0 or walk[-1] != -1 or (n > 1 and walk[:-1].min() < 0):
            raise ValueError("not a Lukasiewicz sequence")
        return cls(_parent_from_lukasiewicz(counts), _check=False)

    @property
    def n_nodes(self):
        return len(self.parent)

    @property
    def n_edges(self):
        return len(self.parent) - 1

    @property
    def root(self):
        return 0

    @cached_property
    def children(self):
        kids = [[] for _ in range(self.n_nodes)]
        for v, p in enumerate(self.parent.tolist()):
            if p >= 0:
                kids[p].append(v)
        return kids

    @cached_property
    def child_counts(self):
        return np.bincount(self.parent[1:], minlength=self.n_nodes)

    @cached_property
    def depth(self):
        heights, _, up_position = self._contour
        return heights[up_position + 1]

    @cached_property
    def dyck(self):
        """Contour word: +1 for a step away from the root, -1 towards it."""
        n = self.n_nodes
        par = self.parent.tolist()
        depth = [0] * n
        for v in range(1, n):
            depth[v] = depth[par[v]] + 1
        steps = np.full(2 * (n - 1), -1, dtype=np.int8)
        # the step into v follows v-1 earlier up-steps and v-depth(v) down-steps
        v = np.arange(1, n)
        steps[2 * v - np.asarray(depth[1:], dtype=np.int64) - 1] = 1
        return steps

    @cached_property
    def _contour(self):
        """(heights, step_node, up_position) for the contour walk.

        ``heights[i]`` is the depth of the i-th visited vertex (length 2n+1),
        ``step_node[i]`` the non-root node whose edge step i traverses, and
        ``up_position[v]`` the step entering v (``-1`` for the root).
        """
        steps = self.dyck
        n = self.n_edges
        heights = np.zeros(2 * n + 1, dtype=np.int64)
        np.cumsum(steps, out=heights[1:])
        up_position = np.full(n + 1, -1, dtype=np.int64)
        step_node = np.empty(2 * n, dtype=np.int64)
        if n:
            is_up = steps > 0
            up_idx = np.flatnonzero(is_up)
            up_position[1:] = up_idx
            partner = _match_steps(heights)
            step_node[up_idx] = np.arange(1, n + 1)
            down_idx = np.flatnonzero(~is_up)
            step_node[down_idx] = step_node[partner[down_idx]]
        return heights, step_node, up_position

    @cached_property
    def contour_vertices(self):
        """t(0), ..., t(2n): vertex visited at each contour time."""
        heights, step_node, _ = self._contour
        t = np.zeros(self.n_edges * 2 + 1, dtype=np.int64)
        if self.n_edges:
            up = self.dyck > 0
            t[1:] = np.where(up, step_node, self.parent[step_node])
        return t

    def __eq__(self, other):
        return isinstance(other, PlaneTree) and np.array_equal(self.parent, other.parent)

    def __hash__(self):
        return hash(self.parent.tobytes())

    def __repr__(self):
        return f"PlaneTree({dyck_string(self)!r})"


@dataclass(frozen=True, eq=False)
class LabeledTree:
    """Plane tree with integer labels, root 0, edge increments in {-1, 0, 1}."""

    tree: PlaneTree
    label: np.ndarray

    def __post_init__(self):
        label = np.array(self.label, dtype=np.int64)
        if label.shape != (self.tree.n_nodes,):
            raise ValueError("need exactly one label per node")
        if label[0] != 0:
            raise ValueError("root label must be 0")
        if self.tree.n_edges and np.abs(label[1:] - label[self.tree.parent[1:]]).max() > 1:
            raise ValueError("label increments must lie in {-1, 0, 1}")
        label.setflags(write=False)
        object.__setattr__(self, "label", label)

    @property
    def n_edges(self):
        return self.tree.n_edges

    def __eq__(self, other):
        return (isinstance(other, LabeledTree) and self.tree == other.tree
                and np.array_equal(self.label, other.label))

    def __hash__(self):
        return hash((self.tree, self.label.tobytes()))

    def __repr__(self):
        return f"LabeledTree({dyck_string(self.tree)!r}, {self.label.tolist()})"


@dataclass(frozen=True)
class CornerSequence:
    """Corners c_0..c_{2n-1} in contour order.

    ``nodes[i]`` is the vertex of corner i and ``positions[i]`` says which
    visit of that vertex it is (0 for the first).
    """

    nodes: np.ndarray
    positions: np.ndarray

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(zip(self.nodes.tolist(), self.positions.tolist()))


class OffspringDistribution:
    """Offspring law on {0, 1, ..., K} stored as a dense probability vector."""

    def __init__(self, pmf, tail_constant=None):
        if isinstance(pmf, dict):
            if any(k < 0 or int(k) != k for k in pmf):
                raise ValueError("offspring counts must be nonnegative integers")
            probs = np.zeros(int(max(pmf)) + 1)
            for k, p in pmf.items():
                probs[int(k)] = p
        else:
            probs = np.asarray(pmf, dtype=float).copy()
        if probs.ndim != 1 or len(probs) == 0:
            raise ValueError("empty offspring law")
        if (probs < 0).any():
            raise ValueError("negative probability")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {probs.sum()!r}, not 1")
        if probs[0] <= 0:
            raise ValueError("pmf(0) must be positive")
        self.probs = probs
        self.probs.setflags(write=False)
        self.tail_constant = tail_constant
        self._cdf = np.cumsum(probs)
        self._cdf[-1] = 1.0

    @property
    def mean(self):
        return float(np.dot(np.arange(len(self.probs)), self.probs))

    @property
    def support(self):
        return np.flatnonzero(self.probs > 0)

    def pmf(self, k):
        return float(self.probs[k]) if 0 <= k < len(self.probs) else 0.0

    def sample(self, rng, size):
        return np.searchsorted(self._cdf, rng.random(size), side="right")

    def __repr__(self):
        nz = {int(k): float(self.probs[k]) for k in self.support[:6]}
        more = ", ..." if len(self.support) > 6 else ""
        return f"OffspringDistribution({nz}{more})"


# ---------------------------------------------------------------- helpers

def _check_preorder(parent):
    if parent[0] != -1:
        raise ValueError("parent[0] must be -1 (root)")
    # parent of v must lie on the root path of v-1
    path = [0]
    for v in range(1, len(parent)):
        p = int(parent[v])
        while path and path[-1] != p:
            path.pop()
        if not path:
            raise ValueError(f"node {v}: parent {p} breaks preorder")
        path.append(v)


def _match_steps(heights):
    """Partner index of every step in a Dyck word given its height profile."""
    n_steps = len(heights) - 1
    level = np.minimum(heights[:-1], heights[1:])
    order = np.lexsort((np.arange(n_steps), level))
    partner = np.empty(n_steps, dtype=np.int64)
    partner[order[0::2]] = order[1::2]
    partner[order[1::2]] = order[0::2]
    return partner


def _parent_from_dyck(steps):
    n = len(steps) // 2
    parent = np.full(n + 1, -1, dtype=np.int64)
    if n == 0:
        return parent
    heights = np.zeros(2 * n + 1, dtype=np.int64)
    np.cumsum(steps, out=heights[1:])
    up_idx = np.flatnonzero(steps > 0)
    depth = heights[up_idx + 1]
    # parent of node k: last up-step at depth-1 opened before it
    width = 2 * n + 1
    keys = depth * width + up_idx
    by_key = np.argsort(keys, kind="stable")
    j = np.searchsorted(keys[by_key], (depth - 1) * width + up_idx) - 1
    deep = depth > 1
    parent[1:] = 0
    parent[1:][deep] = by_key[j[deep]] + 1
    return parent


def _parent_from_lukasiewicz(counts):
    parent = np.full(len(counts), -1, dtype=np.int64)
    stack = []  # (node, children still to attach)
    cl = counts.tolist()
    for v in range(len(cl)):
        if stack:
            p, left = stack[-1]
            parent[v] = p
            if left == 1:
                stack.pop()
            else:
                stack[-1] = (p, left - 1)
        if cl[v]:
            stack.append((v, cl[v]))
    return parent


def catalan(n):
    return math.comb(2 * n, n) // (n + 1)


# --------------------------------------------------------- enumeration

def _lukasiewicz_sequences(n_edges):
    n_nodes = n_edges + 1
    seq = []

    def rec(open_slots, edges_left):
        if len(seq) == n_nodes:
            if open_slots == 0:
                yield tuple(seq)
            return
        for k in range(edges_left + 1):
            slots = open_slots - 1 + k
            if slots == 0 and len(seq) + 1 < n_nodes:
                continue
            seq.append(k)
            yield from rec(slots, edges_left - k)
            seq.pop()

    yield from rec(1, n_edges)


def enumerate_plane_trees(n_edges):
    """All plane trees with ``n_edges`` edges.

    Ordered lexicographically by their preorder child-count sequence.
    """
    if not 0 <= n_edges <= MAX_ENUMERATE_EDGES:
        raise SizeCapError(f"n_edges={n_edges} outside 0..{MAX_ENUMERATE_EDGES}")
    return [PlaneTree.from_lukasiewicz(s) for s in _lukasiewicz_sequences(n_edges)]


def enumerate_labeled_trees(n_edges):
    """All well-labeled trees with ``n_edges`` edges.

    Trees come in :func:`enumerate_plane_trees` order; for each tree the
    increments of nodes 1..n run lexicographically over {-1, 0, 1}^n.
    """
    if not 0 <= n_edges <= MAX_ENUMERATE_LABELED_EDGES:
        raise SizeCapError(f"n_edges={n_edges} outside 0..{MAX_ENUMERATE_LABELED_EDGES}")
    out = []
    for t in enumerate_plane_trees(n_edges):
        for incs in itertools.product((-1, 0, 1), repeat=n_edges):
            out.append(LabeledTree(t, _labels_from_increments(t, np.array((0,) + incs))))
    return out


def _labels_from_increments(tree, increments):
    """Node labels from per-node increments (``increments[0]`` is ignored)."""
    n = tree.n_edges
    label = np.zeros(n + 1, dtype=np.int64)
    if n == 0:
        return label
    _, step_node, up_position = tree._contour
    signed = np.where(tree.dyck > 0, increments[step_node], -increments[step_node])
    walk = np.cumsum(signed)
    label[1:] = walk[up_position[1:]]
    return label


# ------------------------------------------------------------- sampling

def sample_uniform_tree(n_edges, rng):
    """Uniform plane tree with ``n_edges`` edges.

    Shuffles n up-steps and n+1 down-steps, rotates the word to start right
    after its first minimum (cycle lemma) and drops the final down-step.
    """
    if n_edges < 1:
        raise ValueError("n_edges must be >= 1")
    word = np.full(2 * n_edges + 1, -1, dtype=np.int8)
    word[:n_edges] = 1
    rng.shuffle(word)
    first_min = int(np.argmin(np.cumsum(word, dtype=np.int64)))
    word = np.roll(word, -(first_min + 1))
    return PlaneTree.from_dyck(word[:-1])


def attach_uniform_labels(tree, rng):
    """Label ``tree`` with i.i.d. uniform {-1, 0, 1} edge increments."""
    inc = rng.integers(-1, 2, size=tree.n_nodes)
    inc[0] = 0
    return LabeledTree(tree, _labels_from_increments(tree, inc))


def sample_labeled_tree(n_edges, rng):
    return attach_uniform_labels(sample_uniform_tree(n_edges, rng), rng)


def _check_offspring_mean(offspring):
    if offspring.mean > 1 + 1e-9:
        raise ValueError(f"supercritical offspring law (mean {offspring.mean:.6g})")


def sample_gw(offspring, rng, node_cap=10**6):
    """Unconditioned Galton-Watson tree, offspring drawn in preorder."""
    _check_offspring_mean(offspring)
    drawn = []
    total = 0
    walk_end = 0
    chunk = 64
    while True:
        counts = offspring.sample(rng, chunk)
        walk = walk_end + np.cumsum(counts - 1)
        hit = np.flatnonzero(walk == -1)
        if hit.size:
            drawn.append(counts[: hit[0] + 1])
            total += hit[0] + 1
            if total > node_cap:
                raise TreeOverflowError(node_cap)
            break
        drawn.append(counts)
        total += chunk
        if total > node_cap:
            raise TreeOverflowError(node_cap)
        walk_end = int(walk[-1])
        chunk = min(2 * chunk, 1 << 16)
    return PlaneTree.from_lukasiewicz(np.concatenate(drawn))


FEASIBILITY_SCAN_CAP = 10**4


def _size_feasible(offspring, n_vertices):
    """Can n_vertices child counts from the support add up to n_vertices - 1?"""
    support = offspring.support
    target = n_vertices - 1
    if target == 0 or offspring.pmf(1) > 0:
        return True
    coins = support[(support > 0) & (support <= target)]
    if coins.size == 0:
        return False
    if math.gcd(*coins.tolist()) > 1 and target % math.gcd(*coins.tolist()):
        return False
    if n_vertices > FEASIBILITY_SCAN_CAP:
        return True
    # fewest positive counts reaching each total; zeros pad the rest
    big = n_vertices + 1
    fewest = np.full(target + 1, big, dtype=np.int64)
    fewest[0] = 0
    for s in range(1, target + 1):
        prev = s - coins[coins <= s]
        if prev.size:
            fewest[s] = fewest[prev].min() + 1
    return fewest[target] <= n_vertices


def sample_gw_conditioned(offspring, n_vertices, rng, max_attempts=10**6):
    """Galton-Watson tree conditioned to have exactly ``n_vertices`` vertices.

    Rejection on i.i.d. child-count vectors until they sum to n-1, then the
    cycle-lemma rotation turns the accepted vector into a Lukasiewicz path.
    This is exact for the conditional law of any offspring law, critical or
    not, since only fixed-length vectors are drawn. One attempt is one vector.
    """
    if n_vertices < 1:
        raise ValueError("n_vertices must be >= 1")
    if not _size_feasible(offspring, n_vertices):
        raise InfeasibleConditioningError(n_vertices)
    attempts = 0
    batch = 16
    cap = max(1, 2_000_000 // n_vertices)      # rows per draw, a few MB at most
    while attempts < max_attempts:
        batch = int(min(max_attempts - attempts, batch, cap))
        counts = offspring.sample(rng, (batch, n_vertices))
        ok = np.flatnonzero(counts.sum(axis=1) == n_vertices - 1)
        if ok.size:
            attempts += int(ok[0]) + 1
            row = counts[ok[0]]
            first_min = int(np.argmin(np.cumsum(row - 1)))
            return PlaneTree.from_lukasiewicz(np.roll(row, -(first_min + 1)))
        attempts += batch
        batch *= 2
    raise RetryLimitError(attempts)


def heavy_tail_offspring(alpha, k_max):
    """Critical law with pmf(k) = c k^(-1-alpha) for 1 <= k <= k_max.

    c is fixed by criticality (mean exactly 1) and pmf(0) takes the remaining
    mass; the realised c is stored as ``tail_constant``.
    """
    if not 1 < alpha < 2:
        raise ValueError("alpha must lie in (1, 2)")
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    k = np.arange(1, k_max + 1, dtype=float)
    weights = k ** (-1.0 - alpha)
    c = 1.0 / np.dot(k, weights)
    probs = np.empty(k_max + 1)
    probs[1:] = c * weights
    probs[0] = 1.0 - probs[1:].sum()
    if probs[0] <= 0:
        raise ValueError("tail too heavy to balance with pmf(0)")
    return OffspringDistribution(probs, tail_constant=float(c))


# ------------------------------------------------------------ encodings

def corner_sequence(tree):
    n = tree.n_edges
    if n == 0:
        raise EmptyContourError("a single-vertex tree has no corner sequence")
    nodes = tree.contour_vertices[:-1]
    order = np.argsort(nodes, kind="stable")
    first = np.searchsorted(nodes[order], nodes[order], side="left")
    positions = np.empty(2 * n, dtype=np.int64)
    positions[order] = np.arange(2 * n) - first
    return CornerSequence(nodes, positions)


def contour_function(tree):
    if tree.n_edges == 0:
        raise EmptyContourError("contour of a single-vertex tree is degenerate")
    return tree._contour[0].copy()


def label_function(lt):
    if lt.tree.n_edges == 0:
        raise EmptyContourError("label function of a single-vertex tree is degenerate")
    return lt.label[lt.tree.contour_vertices]


# -------------------------------------------------------- serialisation

def dyck_string(tree):
    return "".join("(" if s > 0 else ")" for s in tree.dyck.tolist())


def dumps_tree(obj):
    """Shape line of balanced parentheses, then the labels line if labeled."""
    if isinstance(obj, LabeledTree):
        return dyck_string(obj.tree) + "\n" + " ".join(map(str, obj.label.tolist())) + "\n"
    return dyck_string(obj) + "\n"


def loads_tree(text):
    lines = text.split("\n")
    shape = lines[0].strip()
    if set(shape) - {"(", ")"}:
        raise ValueError("shape line may only contain parentheses")
    tree = PlaneTree.from_dyck(np.array([1 if ch == "(" else -1 for ch in shape], dtype=np.int8))
    rest = [ln for ln in lines[1:] if ln.strip()]
    if not rest:
        return tree
    return LabeledTree(tree, np.array([int(x) for x in rest[0].split()], dtype=np.int64))
