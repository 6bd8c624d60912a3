"""Looptrees of heavy-tailed Galton-Watson trees conditioned on their size."""
import numpy as np

from randmaps.looptree import build_looptree, loop_diameter, stable_scaling_samples
from randmaps.tree import PlaneTree, heavy_tail_offspring, sample_gw_conditioned

star = build_looptree(PlaneTree([-1, 0, 0, 0]))
print("star with three leaves ->", sorted(map(tuple, star.edges.tolist())))

offspring = heavy_tail_offspring(1.5, 10**4)
print(f"offspring mean {offspring.mean:.6f}")
rng = np.random.default_rng(3)
tau = sample_gw_conditioned(offspring, 1000, rng)
g = build_looptree(tau)
print(f"n=1000: max degree {tau.child_counts.max()}, looptree diameter {loop_diameter(g)}")

tab = stable_scaling_samples(1.5, [250, 500, 1000], 100, seed=11)
for n in (250, 500, 1000):
    print(f"n={n:5d} mean n^(-2/3) diam {tab['value'][tab['n'] == n].mean():.3f}")
