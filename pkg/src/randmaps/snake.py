"""Discretised Brownian snake's head: normalised excursion and its Gaussian labels.

On the grid t_i = i/m the label vector has covariance
K[i, j] = min(e[min(i, j)], ..., e[max(i, j)]), which is sampled through a
Cholesky factor. K is singular at the endpoints (e_0 = e_m = 0) and those
coordinates are set to 0 deterministically.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from randmaps.errors import NumericalError
from randmaps.seeding import KIND_TAGS, replica_rng
from randmaps.stats import EmpiricalMeasure

DEFAULT_GRID = 2000
JITTERS = (0.0, 1e-12, 1e-11, 1e-10)


def sample_excursion(m, rng):
    """Grid excursion e_0..e_m: Vervaat transform of a Gaussian bridge.

    The bridge has increments of variance 1/m; it is rotated cyclically at
    its earliest minimum, so the result starts and ends at 0 and stays >= 0.
    """
    if m < 2:
        raise ValueError("grid size must be >= 2")
    walk = np.concatenate([[0.0], np.cumsum(rng.standard_normal(m) / np.sqrt(m))])
    bridge = walk - np.linspace(0.0, 1.0, m + 1) * walk[-1]
    k = int(np.argmin(bridge[:-1]))
    e = np.empty(m + 1)
    e[:-1] = np.roll(bridge[:-1], -k) - bridge[k]
    e[-1] = 0.0
    e[0] = 0.0
    return e


def min_kernel(e):
    """K[i, j] = min of e over the index interval between i and j."""
    e = np.asarray(e, dtype=float)
    size = len(e)
    K = np.empty((size, size))
    for i in range(size):
        row = np.minimum.accumulate(e[i:])
        K[i, i:] = row
        K[i:, i] = row
    return K


class LabelSampler:
    """Factorised min-kernel for one excursion; reusable across draws and threads."""

    def __init__(self, e):
        self.e = np.asarray(e, dtype=float)
        self.free = np.flatnonzero(self.e > 0)
        K = min_kernel(self.e)[np.ix_(self.free, self.free)]
        self.jitter = None
        for jitter in JITTERS:
            try:
                self.factor = np.linalg.cholesky(K + jitter * np.eye(len(K)))
            except np.linalg.LinAlgError:
                continue
            self.jitter = jitter
            break
        if self.jitter is None:
            raise NumericalError(f"min-kernel not positive definite even with jitter {JITTERS[-1]}")

    def sample(self, rng, size=None):
        """One label path (shape (m+1,)) or ``size`` of them (shape (size, m+1))."""
        shape = (1 if size is None else size, len(self.free))
        z = np.zeros((shape[0], len(self.e)))
        z[:, self.free] = rng.standard_normal(shape) @ self.factor.T
        return z[0] if size is None else z


def sample_label_process(e, rng):
    return LabelSampler(e).sample(rng)


def sample_label_process_sequential(e, rng):
    """Same law as :func:`sample_label_process`, in O(m) without any matrix.

    Grid points form a tree whose branch point between i and i+1 sits at
    height min(e_i, e_{i+1}); Z is Brownian motion along that tree. A stack
    holds (height, value) pairs on the ancestral line of the current point;
    values strictly between stored heights are filled by Brownian bridges.
    """
    e = np.asarray(e, dtype=float)
    z = np.zeros(len(e))
    normals = rng.standard_normal((len(e), 2))
    heights = [0.0]
    values = [0.0]
    for i in range(len(e) - 1):
        b = min(e[i], e[i + 1])
        top_h, top_z = heights[-1], values[-1]
        while heights[-1] > b:
            top_h, top_z = heights.pop(), values.pop()
        if heights[-1] < b:
            lo_h, lo_z = heights[-1], values[-1]
            frac = (b - lo_h) / (top_h - lo_h)
            sd = np.sqrt((b - lo_h) * (top_h - b) / (top_h - lo_h))
            heights.append(b)
            values.append(lo_z + frac * (top_z - lo_z) + sd * normals[i, 0])
        if e[i + 1] > b:
            heights.append(e[i + 1])
            values.append(values[-1] + np.sqrt(e[i + 1] - b) * normals[i, 1])
        z[i + 1] = values[-1]
    return z


@dataclass(frozen=True)
class SnakePath:
    e: np.ndarray
    Z: np.ndarray

    def __post_init__(self):
        if len(self.e) != len(self.Z) or len(self.e) < 3:
            raise ValueError("e and Z must share a grid of at least 3 points")
        if self.e[0] != 0 or self.e[-1] != 0 or (self.e < 0).any():
            raise ValueError("e must be a nonnegative excursion vanishing at both ends")
        if self.Z[0] != 0:
            raise ValueError("Z must start at 0")

    @property
    def grid_size(self):
        return len(self.e) - 1

    @property
    def t(self):
        return np.linspace(0.0, 1.0, len(self.e))


LABEL_METHODS = ("cholesky", "sequential")


def sample_snake(m, rng, method="cholesky"):
    """Excursion plus labels; ``method`` picks the exact label sampler."""
    if method not in LABEL_METHODS:
        raise ValueError(f"unknown label method {method!r}")
    e = sample_excursion(m, rng)
    if method == "cholesky":
        return SnakePath(e, sample_label_process(e, rng))
    return SnakePath(e, sample_label_process_sequential(e, rng))


@dataclass(frozen=True)
class ISESummary:
    measure: EmpiricalMeasure
    sup: float
    inf: float
    width: float
    shifted: EmpiricalMeasure


def ise_summary(path):
    """Occupation measure of Z (mass 1/m on Z_0..Z_{m-1}) with sup, inf and width."""
    mu = EmpiricalMeasure.from_samples(path.Z[:-1])
    return ISESummary(mu, mu.sup, mu.inf, mu.width, mu.shift_nonnegative())


def snake_widths(m, replicas, seed, method="sequential"):
    """Width of the label occupation measure for independent snakes.

    Defaults to the O(m) sampler: the law is the same as with the dense
    factorization, at a fraction of the cost for thousands of replicas.
    """
    out = np.empty(replicas)
    for i in range(replicas):
        rng = replica_rng(seed, KIND_TAGS["snake"], m, i)
        out[i] = ise_summary(sample_snake(m, rng, method)).width
    return out


def path_csv(path):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "e", "Z"])
    for row in zip(path.t.tolist(), path.e.tolist(), path.Z.tolist()):
        w.writerow([repr(x) for x in row])
    return buf.getvalue()


def measure_csv(mu):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["atom", "mass"])
    for a, p in zip(mu.atoms.tolist(), mu.masses.tolist()):
        w.writerow([repr(a), repr(p)])
    return buf.getvalue()
