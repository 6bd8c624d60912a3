"""Discretised Brownian snake: covariance check and width convergence.

The width of the label range converges slowly under grid refinement;
the printed means creep upwards roughly like m^(-1/4).
"""
import numpy as np

from randmaps.snake import LabelSampler, ise_summary, min_kernel, sample_excursion, sample_snake, snake_widths

rng = np.random.default_rng(7)
e = sample_excursion(100, rng)
Z = LabelSampler(e).sample(rng, size=20000)
K = min_kernel(e)
print("max |empirical cov - min kernel|:", float(np.abs(np.cov(Z.T, bias=True) - K).max()))

s = ise_summary(sample_snake(2000, rng))
print(f"one snake: inf {s.inf:.3f} sup {s.sup:.3f} width {s.width:.3f}")

for m in (250, 1000, 4000):
    w = snake_widths(m, 400, seed=1)
    print(f"m={m:5d} mean width {w.mean():.3f}")
