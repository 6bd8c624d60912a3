"""Rooted maps as rotation systems.

Half-edges are ``0 .. 2E-1`` and half-edge ``h`` is glued to ``h ^ 1``.
``rotation_next[h]`` is the next half-edge counterclockwise around the vertex
``vertex_of[h]`` (``h`` leaves that vertex). Faces are the cycles of
``h -> rotation_next[h ^ 1]``. The root vertex is the origin of the root
half-edge.

Maps are immutable once built; every query below is read-only.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from randmaps._graph import bfs, csr_from_edges, cycle_ids, is_permutation
from randmaps.errors import (
    CorruptedMapError,
    DisconnectedMapError,
    InvolutionError,
    MapValidationError,
    RotationError,
)

INT63_MAX = 2**63 - 1


class RootedMap:
    """Validated rotation system with a root half-edge and optional pointed vertex."""

    def __init__(self, vertex_of, rotation_next, root=0, pointed_vertex=None, *,
                 n_vertices=None, first_half_edge=None, check=True):
        vertex_of = np.array(vertex_of, dtype=np.int64)
        rotation_next = np.array(rotation_next, dtype=np.int64)
        if n_vertices is None:
            n_vertices = int(vertex_of.max()) + 1 if vertex_of.size else 0
        self.n_vertices = int(n_vertices)
        self.vertex_of = vertex_of
        self.rotation_next = rotation_next
        self.root = int(root)
        self.pointed_vertex = None if pointed_vertex is None else int(pointed_vertex)
        if check:
            self._validate()
        if first_half_edge is None:
            first_half_edge = np.full(self.n_vertices, np.iinfo(np.int64).max)
            np.minimum.at(first_half_edge, vertex_of, np.arange(len(vertex_of)))
        self.first_half_edge = np.asarray(first_half_edge, dtype=np.int64)
        for arr in (self.vertex_of, self.rotation_next, self.first_half_edge):
            arr.setflags(write=False)
        if check:
            self.genus  # raises CorruptedMapError on a bad Euler count

    def _validate(self):
        n_half = len(self.vertex_of)
        if n_half == 0 or n_half % 2:
            raise InvolutionError(f"need a positive even number of half-edges, got {n_half}")
        if self.rotation_next.shape != (n_half,) or not is_permutation(self.rotation_next):
            raise RotationError("rotation_next is not a permutation of the half-edges")
        if self.vertex_of.min() < 0 or self.vertex_of.max() >= self.n_vertices:
            raise RotationError("vertex id out of range")
        if (self.vertex_of[self.rotation_next] != self.vertex_of).any():
            raise RotationError("rotation_next leaves its vertex")
        if np.bincount(self.vertex_of, minlength=self.n_vertices).min() == 0:
            raise RotationError("isolated vertex without half-edges")
        if len(np.unique(cycle_ids(self.rotation_next))) != self.n_vertices:
            raise RotationError("rotation at some vertex splits into several cycles")
        if not 0 <= self.root < n_half:
            raise MapValidationError(f"root half-edge {self.root} out of range")
        if self.pointed_vertex is not None and not 0 <= self.pointed_vertex < self.n_vertices:
            raise MapValidationError(f"pointed vertex {self.pointed_vertex} out of range")
        if (self.bfs_distances(0) < 0).any():
            raise DisconnectedMapError("underlying graph is disconnected")

    # ---------------------------------------------------------- counts

    @property
    def n_half_edges(self):
        return len(self.vertex_of)

    @property
    def n_edges(self):
        return len(self.vertex_of) // 2

    @property
    def root_vertex(self):
        return int(self.vertex_of[self.root])

    @cached_property
    def face_next(self):
        return self.rotation_next[np.arange(self.n_half_edges) ^ 1]

    @cached_property
    def face_of(self):
        """Face id of every half-edge; faces are numbered by their smallest half-edge."""
        _, face = np.unique(cycle_ids(self.face_next), return_inverse=True)
        return face

    @property
    def n_faces(self):
        return int(self.face_of.max()) + 1

    @cached_property
    def face_degrees(self):
        return np.bincount(self.face_of)

    def faces(self):
        """Face cycles as lists of half-edges, ordered by their smallest half-edge."""
        nxt = self.face_next.tolist()
        seen = bytearray(self.n_half_edges)
        out = []
        for h in range(self.n_half_edges):
            if seen[h]:
                continue
            cyc = []
            g = h
            while not seen[g]:
                seen[g] = 1
                cyc.append(g)
                g = nxt[g]
            out.append(cyc)
        return out

    @cached_property
    def genus(self):
        chi = self.n_vertices - self.n_edges + self.n_faces
        if chi > 2 or chi % 2:
            raise CorruptedMapError(f"Euler characteristic {chi} gives no valid genus")
        return (2 - chi) // 2

    # --------------------------------------------------------- graphs

    @cached_property
    def _csr(self):
        ends = self.vertex_of.reshape(-1, 2)
        return csr_from_edges(self.n_vertices, ends[:, 0], ends[:, 1])

    def bfs_distances(self, source):
        indptr, indices = self._csr
        return bfs(indptr, indices, int(source))

    def is_bipartite(self):
        dist = self.bfs_distances(0)
        ends = self.vertex_of.reshape(-1, 2)
        return bool(((dist[ends[:, 0]] - dist[ends[:, 1]]) % 2 == 1).all())

    def distance_profile(self, kind="edge"):
        dist = self.bfs_distances(self.root_vertex)
        if kind == "vertex":
            return DistanceProfile(dist, "vertex")
        if kind == "edge":
            ends = self.vertex_of.reshape(-1, 2)
            return DistanceProfile(np.minimum(dist[ends[:, 0]], dist[ends[:, 1]]), "edge")
        raise ValueError(f"unknown profile kind {kind!r}")

    def count_geodesics(self, u, v):
        """Number of shortest u-v paths, counted as edge sequences.

        Parallel edges therefore give distinct paths.
        """
        dist = self.bfs_distances(u)
        target = int(dist[v])
        ways = [0] * self.n_vertices
        ways[u] = 1
        ends = self.vertex_of.reshape(-1, 2).tolist()
        dl = dist.tolist()
        by_level = {}
        for a, b in ends:
            if dl[b] == dl[a] + 1:
                by_level.setdefault(dl[b], []).append((a, b))
            elif dl[a] == dl[b] + 1:
                by_level.setdefault(dl[a], []).append((b, a))
        for level in range(1, target + 1):
            for a, b in by_level.get(level, ()):
                ways[b] += ways[a]
                if ways[b] > INT63_MAX:
                    raise OverflowError("geodesic count exceeds 2^63 - 1")
        return ways[v]

    # ---------------------------------------------------------- views

    def rotations(self):
        """Per-vertex half-edge lists in rotation order, from ``first_half_edge``."""
        nxt = self.rotation_next.tolist()
        out = []
        for start in self.first_half_edge.tolist():
            cyc = [start]
            g = nxt[start]
            while g != start:
                cyc.append(g)
                g = nxt[g]
            out.append(cyc)
        return out

    def with_root(self, root):
        return RootedMap(self.vertex_of, self.rotation_next, root, self.pointed_vertex,
                         n_vertices=self.n_vertices, first_half_edge=self.first_half_edge,
                         check=False)

    def reversed_root(self):
        return self.with_root(self.root ^ 1)

    def canonical_code(self, pointed=True):
        """Relabelling-invariant fingerprint of the rooted (and pointed) map.

        Half-edges are renumbered in breadth-first order from the root,
        exploring rotation then twin; rooted maps have no non-trivial
        root-preserving automorphism, so equal codes mean isomorphic maps.
        """
        nxt = self.rotation_next.tolist()
        new = [-1] * self.n_half_edges
        order = [self.root]
        new[self.root] = 0
        i = 0
        while i < len(order):
            h = order[i]
            i += 1
            for g in (nxt[h], h ^ 1):
                if new[g] < 0:
                    new[g] = len(order)
                    order.append(g)
        sigma = tuple(new[nxt[h]] for h in order)
        alpha = tuple(new[h ^ 1] for h in order)
        point = None
        if pointed and self.pointed_vertex is not None:
            point = min(new[h] for h in np.flatnonzero(self.vertex_of == self.pointed_vertex).tolist())
        return sigma, alpha, point

    def __eq__(self, other):
        return (isinstance(other, RootedMap)
                and self.n_vertices == other.n_vertices
                and self.root == other.root
                and self.pointed_vertex == other.pointed_vertex
                and np.array_equal(self.vertex_of, other.vertex_of)
                and np.array_equal(self.rotation_next, other.rotation_next))

    __hash__ = None

    def __repr__(self):
        return (f"RootedMap(V={self.n_vertices}, E={self.n_edges}, F={self.n_faces}, "
                f"root={self.root}, pointed={self.pointed_vertex})")


@dataclass(frozen=True)
class DistanceProfile:
    values: np.ndarray
    kind: str

    def __len__(self):
        return len(self.values)


def build_map(rotations, root=0, pointed_vertex=None, twin=None):
    """Validated map from per-vertex half-edge lists in counterclockwise order.

    ``twin`` may be given explicitly, but it must coincide with ``h ^ 1``.
    """
    flat = [h for cyc in rotations for h in cyc]
    n_half = len(flat)
    if n_half == 0 or n_half % 2:
        raise InvolutionError(f"need a positive even number of half-edges, got {n_half}")
    if sorted(flat) != list(range(n_half)):
        raise RotationError("every half-edge 0..2E-1 must appear in exactly one rotation")
    if any(len(cyc) == 0 for cyc in rotations):
        raise RotationError("empty rotation")
    if twin is not None:
        twin = np.asarray(twin)
        ids = np.arange(n_half)
        if twin.shape != (n_half,) or (twin[twin] != ids).any() or (twin == ids).any():
            raise InvolutionError("twin is not a fixed-point-free involution")
        if (twin != ids ^ 1).any():
            raise InvolutionError("twin must pair half-edges as (2k, 2k+1)")
    vertex_of = np.empty(n_half, dtype=np.int64)
    rotation_next = np.empty(n_half, dtype=np.int64)
    for v, cyc in enumerate(rotations):
        vertex_of[cyc] = v
        rotation_next[cyc] = cyc[1:] + cyc[:1]
    return RootedMap(vertex_of, rotation_next, root, pointed_vertex,
                     n_vertices=len(rotations),
                     first_half_edge=[cyc[0] for cyc in rotations])


def faces(m):
    return [(cyc, len(cyc)) for cyc in m.faces()]


def is_bipartite(m):
    return m.is_bipartite()


def bfs_distances(m, source):
    return m.bfs_distances(source)


def distance_profile(m, kind="edge"):
    return m.distance_profile(kind)


def count_geodesics(m, u, v):
    return m.count_geodesics(u, v)


def genus(m):
    return m.genus


# ------------------------------------------------------------ file format

def dumps_map(m):
    """Text form: ``V E root [pointed]`` then ``v: h1 h2 ...`` per vertex."""
    head = [m.n_vertices, m.n_edges, m.root]
    if m.pointed_vertex is not None:
        head.append(m.pointed_vertex)
    lines = [" ".join(map(str, head))]
    for v, cyc in enumerate(m.rotations()):
        lines.append(f"{v}: " + " ".join(map(str, cyc)))
    return "\n".join(lines) + "\n"


def loads_map(text):
    """Inverse of :func:`dumps_map`; blank lines and ``#`` comments are skipped."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise MapValidationError("empty map file")
    head = [int(x) for x in lines[0].split()]
    if len(head) not in (3, 4):
        raise MapValidationError("header must be 'V E root [pointed]'")
    n_vertices, n_edges, root = head[:3]
    pointed = head[3] if len(head) == 4 else None
    if len(lines) - 1 != n_vertices:
        raise MapValidationError(f"header announces {n_vertices} vertices, file has {len(lines) - 1}")
    rotations = []
    for v, ln in enumerate(lines[1:]):
        tag, _, rest = ln.partition(":")
        if int(tag) != v:
            raise MapValidationError(f"vertex lines out of order at {tag!r}")
        rotations.append([int(x) for x in rest.split()])
    m = build_map(rotations, root, pointed)
    if m.n_edges != n_edges:
        raise MapValidationError(f"header announces {n_edges} edges, rotations give {m.n_edges}")
    return m


def save_map(m, path):
    with open(path, "w") as fh:
        fh.write(dumps_map(m))


def load_map(path):
    with open(path) as fh:
        return loads_map(fh.read())
