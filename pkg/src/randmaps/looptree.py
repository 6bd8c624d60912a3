"""Discrete looptrees.

Loop(tau) lives on the vertices of tau. Consecutive siblings are joined,
and so is a parent to its first and to its last child; an only child
therefore gets two parallel edges to its parent, and a vertex with k >= 1
children closes a cycle of length k + 1.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from randmaps._graph import bfs, csr_from_edges
from randmaps.seeding import KIND_TAGS, replica_rng
from randmaps.tree import heavy_tail_offspring, sample_gw_conditioned


@dataclass(frozen=True, eq=False)
class LoopGraph:
    n_vertices: int
    edges: np.ndarray  # (E, 2) int array, one row per edge copy

    @cached_property
    def _csr(self):
        return csr_from_edges(self.n_vertices, self.edges[:, 0], self.edges[:, 1])

    @property
    def n_edges(self):
        return len(self.edges)

    def distances(self, source):
        return bfs(*self._csr, int(source))

    def diameter(self):
        return loop_diameter(self)

    def is_connected(self):
        return bool((self.distances(0) >= 0).all())


def build_looptree(tau):
    if tau.n_nodes == 1:
        return LoopGraph(1, np.zeros((0, 2), dtype=np.int64))
    parent = tau.parent
    kids = np.arange(1, tau.n_nodes)
    par = parent[1:]
    # preorder ids: children of a vertex are already sorted by id, grouped by parent
    order = np.argsort(par, kind="stable")
    kids, par = kids[order], par[order]
    same = par[1:] == par[:-1]
    sibling = np.stack([kids[:-1][same], kids[1:][same]], axis=1)
    first = np.r_[True, ~same]
    last = np.r_[~same, True]
    to_first = np.stack([kids[first], par[first]], axis=1)
    to_last = np.stack([kids[last], par[last]], axis=1)
    edges = np.concatenate([sibling, to_first, to_last]).astype(np.int64).reshape(-1, 2)
    return LoopGraph(tau.n_nodes, edges)


def loop_distances(g, source):
    return g.distances(source)


def loop_diameter(g):
    """Exact diameter by eccentricity bounding.

    Every BFS tightens lower/upper eccentricity bounds of all vertices. A
    vertex is settled once its upper bound is at most the best lower bound
    on the diameter; when all are settled that lower bound is the diameter.
    Sources alternate between the largest upper and the smallest lower bound.
    """
    n = g.n_vertices
    if n <= 1:
        return 0
    lo = np.zeros(n, dtype=np.int64)
    hi = np.full(n, n, dtype=np.int64)
    best = 0
    pick_high = True
    # the far end of a first sweep is usually peripheral
    v = int(np.argmax(g.distances(0)))
    while True:
        d = g.distances(v)
        ecc = int(d.max())
        np.maximum(lo, np.maximum(d, ecc - d), out=lo)
        np.minimum(hi, ecc + d, out=hi)
        best = max(best, int(lo.max()))
        open_ = np.flatnonzero(hi > best)
        if open_.size == 0:
            return best
        if pick_high:
            v = int(open_[np.argmax(hi[open_])])
        else:
            v = int(open_[np.argmin(lo[open_])])
        pick_high = not pick_high


def stable_scaling_samples(alpha, n_list, replicas, seed, k_max=10**4, max_attempts=10**6):
    """n^(-1/alpha) * diam Loop(tau_n) for conditioned heavy-tailed GW trees.

    Returns a structured array with fields ``n``, ``replica``, ``value``.
    Replica i at size n draws from the stream keyed by (seed, n, i).
    """
    offspring = heavy_tail_offspring(alpha, k_max)
    rows = []
    for n in n_list:
        for i in range(replicas):
            rng = replica_rng(seed, KIND_TAGS["looptree"], n, i)
            tau = sample_gw_conditioned(offspring, n, rng, max_attempts=max_attempts)
            rows.append((n, i, n ** (-1.0 / alpha) * loop_diameter(build_looptree(tau))))
    return np.array(rows, dtype=[("n", np.int64), ("replica", np.int64), ("value", float)])


def dumps_edge_list(g):
    return "".join(f"{u} {v}\n" for u, v in g.edges.tolist())
