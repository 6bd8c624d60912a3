"""Vectorised graph plumbing: CSR adjacency, level-synchronous BFS, permutation cycles."""

import numpy as np


def csr_from_edges(n_vertices, u, v):
    """Symmetric CSR adjacency of a multigraph given as two endpoint arrays.

    Parallel edges are kept (each appears once per copy in ``indices``).
    """
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    src = np.concatenate([u, v])
    dst = np.concatenate([v, u])
    order = np.argsort(src, kind="stable")
    indices = dst[order]
    counts = np.bincount(src, minlength=n_vertices)
    indptr = np.zeros(n_vertices + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, indices


def _gather(indptr, indices, frontier):
    starts = indptr[frontier]
    counts = indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return indices[:0]
    offsets = np.repeat(starts - np.cumsum(counts) + counts, counts)
    return indices[offsets + np.arange(total)]


def bfs(indptr, indices, source):
    """Graph distances from ``source``; unreachable vertices get -1."""
    n = len(indptr) - 1
    dist = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    d = 0
    while frontier.size:
        nbrs = _gather(indptr, indices, frontier)
        nbrs = nbrs[dist[nbrs] < 0]
        if nbrs.size == 0:
            break
        frontier = np.unique(nbrs)
        d += 1
        dist[frontier] = d
    return dist


def cycle_ids(perm):
    """Label every point of a permutation by the smallest point of its cycle.

    Pointer doubling: O(N log L) for longest cycle length L.
    """
    perm = np.asarray(perm, dtype=np.int64)
    label = np.arange(len(perm), dtype=np.int64)
    jump = perm.copy()
    span = 1
    while span < len(perm):
        label = np.minimum(label, label[jump])
        jump = jump[jump]
        span *= 2
    return label


def is_permutation(arr):
    arr = np.asarray(arr)
    n = len(arr)
    if n == 0:
        return True
    if arr.min() < 0 or arr.max() >= n:
        return False
    return np.bincount(arr, minlength=n).max() == 1
