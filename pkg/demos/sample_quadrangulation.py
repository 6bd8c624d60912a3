"""Sample a large uniform quadrangulation and look at its distances."""
import numpy as np

from randmaps.cvs import tree_to_quad
from randmaps.stats import rescale_profile
from randmaps.tree import sample_labeled_tree

rng = np.random.default_rng(2024)
n = 20000
lt = sample_labeled_tree(n, rng)
q = tree_to_quad(lt, int(rng.integers(2)))
print(f"V={q.n_vertices} E={q.n_edges} F={q.n_faces} genus={q.genus} bipartite={q.is_bipartite()}")

dist = q.bfs_distances(q.pointed_vertex)
print("radius:", int(dist.max()), "= label width + 1:", int(np.ptp(lt.label)) + 1)

mu = rescale_profile(q.distance_profile("vertex"), 8 / 9)
print(f"rescaled distance profile from the root vertex: sup {mu.sup:.3f}, mean {mu.mean():.3f}")
root_v = q.root_vertex
print("geodesics from the root vertex to the pointed vertex:",
      q.count_geodesics(root_v, q.pointed_vertex))
