"""Brute-force oracles shared by the test modules.

Everything here is written independently of the library code it checks:
plain recursion, exhaustive search and dense matrices.
"""

import itertools

import numpy as np
import pytest
from hypothesis import settings

from randmaps.errors import MapValidationError
from randmaps.maps import build_map

# one CPU and large examples: wall-clock deadlines only add flakiness
settings.register_profile("randmaps", deadline=None)
settings.load_profile("randmaps")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# ------------------------------------------------------------------ trees

def catalan_recurrence(n):
    c = [1]
    for m in range(1, n + 1):
        c.append(sum(c[i] * c[m - 1 - i] for i in range(m)))
    return c[n]


def brute_dyck_words(n):
    """All Dyck words of semilength n, by filtering every +-1 word."""
    out = []
    for word in itertools.product((1, -1), repeat=2 * n):
        h = np.cumsum(word)
        if len(word) == 0 or (h.min() >= 0 and h[-1] == 0):
            out.append(word)
    return out


def parent_from_word(word):
    """Preorder parent array of a Dyck word with an explicit stack."""
    parent = [-1]
    stack = [0]
    for s in word:
        if s == 1:
            parent.append(stack[-1])
            stack.append(len(parent) - 1)
        else:
            stack.pop()
    return parent


def brute_labelings(parent):
    """Every labeling with root 0 and increments in {-1, 0, 1}."""
    n = len(parent) - 1
    for incs in itertools.product((-1, 0, 1), repeat=n):
        lab = [0] * (n + 1)
        for v in range(1, n + 1):
            lab[v] = lab[parent[v]] + incs[v - 1]
        yield lab


def brute_corners(parent):
    """Contour vertex list by recursion: a vertex is seen on arrival and again
    after each child; the final return to the root is dropped."""
    kids = [[] for _ in parent]
    for v, p in enumerate(parent):
        if p >= 0:
            kids[p].append(v)
    out = []

    def walk(v):
        out.append(v)
        for c in kids[v]:
            walk(c)
            out.append(v)

    walk(0)
    return out[:-1]


# ------------------------------------------------------------------- graphs

def floyd_warshall(n, edges):
    inf = float("inf")
    d = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    for u, v in edges:
        if u != v:
            d[u][v] = d[v][u] = 1
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def count_shortest_paths_exhaustive(n, edges, u, v):
    """Enumerate every simple path u -> v as an edge sequence; count the shortest."""
    incident = [[] for _ in range(n)]
    for idx, (a, b) in enumerate(edges):
        incident[a].append((idx, b))
        if a != b:
            incident[b].append((idx, a))
    best = [float("inf"), 0]

    def dfs(x, seen, length):
        if length > best[0]:
            return
        if x == v:
            if length < best[0]:
                best[0], best[1] = length, 1
            else:
                best[1] += 1
            return
        for _, y in incident[x]:
            if y not in seen:
                seen.add(y)
                dfs(y, seen, length + 1)
                seen.remove(y)

    dfs(u, {u}, 0)
    return best[1]


def map_edges(m):
    return [tuple(e) for e in m.vertex_of.reshape(-1, 2).tolist()]


def all_rooted_plane_maps(n_edges):
    """Every rooted plane map with n_edges edges, one per isomorphism class.

    Rotation systems are all permutations of the 2n half-edges; vertices are
    their cycles; twins are h ^ 1. Rooted maps are rigid, so a relabelling by
    BFS from the root is a complete isomorphism fingerprint; it is computed
    here without the library's canonical code.
    """
    n_half = 2 * n_edges
    seen = {}
    for perm in itertools.permutations(range(n_half)):
        cycles = []
        done = [False] * n_half
        for h in range(n_half):
            if not done[h]:
                cyc = []
                g = h
                while not done[g]:
                    done[g] = True
                    cyc.append(g)
                    g = perm[g]
                cycles.append(cyc)
        try:
            m = build_map(cycles, root=0)
        except MapValidationError:
            continue
        if m.genus != 0:
            continue
        key = _bfs_fingerprint(perm, 0)
        seen.setdefault(key, m)
    return list(seen.values())


def _bfs_fingerprint(perm, root):
    new = {root: 0}
    order = [root]
    i = 0
    while i < len(order):
        h = order[i]
        i += 1
        for g in (perm[h], h ^ 1):
            if g not in new:
                new[g] = len(order)
                order.append(g)
    return tuple((new[perm[h]], new[h ^ 1]) for h in order)
