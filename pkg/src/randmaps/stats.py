"""Finite probability measures on the line and the KS distance between them."""

import numpy as np

MASS_TOL = 1e-12


class EmpiricalMeasure:
    """Weighted atoms, sorted and merged, with masses summing to 1."""

    def __init__(self, atoms, masses):
        atoms = np.asarray(atoms, dtype=float)
        masses = np.asarray(masses, dtype=float)
        if atoms.shape != masses.shape or atoms.ndim != 1 or atoms.size == 0:
            raise ValueError("atoms and masses must be matching non-empty 1-d arrays")
        if (masses <= 0).any():
            raise ValueError("masses must be positive")
        if abs(masses.sum() - 1.0) > MASS_TOL * max(1, atoms.size):
            raise ValueError(f"masses sum to {masses.sum()!r}")
        uniq, inv = np.unique(atoms, return_inverse=True)
        self.atoms = uniq
        self.masses = np.bincount(inv, weights=masses)
        self.atoms.setflags(write=False)
        self.masses.setflags(write=False)

    @classmethod
    def from_samples(cls, values, weights=None):
        values = np.asarray(values, dtype=float)
        if weights is None:
            weights = np.full(values.size, 1.0 / values.size)
        else:
            weights = np.asarray(weights, dtype=float)
            weights = weights / weights.sum()
        return cls(values, weights)

    @property
    def inf(self):
        return float(self.atoms[0])

    @property
    def sup(self):
        return float(self.atoms[-1])

    @property
    def width(self):
        return self.sup - self.inf

    def cdf(self, x):
        """F(x) = mass of (-inf, x]."""
        cum = np.cumsum(self.masses)
        idx = np.searchsorted(self.atoms, x, side="right")
        return np.where(idx > 0, cum[np.maximum(idx - 1, 0)], 0.0)

    def shift(self, offset):
        return EmpiricalMeasure(self.atoms + offset, self.masses)

    def shift_nonnegative(self):
        return self.shift(-self.inf)

    def scale(self, factor):
        return EmpiricalMeasure(self.atoms * factor, self.masses)

    def mean(self):
        return float(np.dot(self.atoms, self.masses))

    def __eq__(self, other):
        return (isinstance(other, EmpiricalMeasure) and np.array_equal(self.atoms, other.atoms)
                and np.allclose(self.masses, other.masses, rtol=0, atol=1e-15))

    __hash__ = None

    def __repr__(self):
        return f"EmpiricalMeasure({self.atoms.size} atoms on [{self.inf:.4g}, {self.sup:.4g}])"


def ks_distance(mu, nu):
    """sup_x |F_mu(x) - F_nu(x)|, attained at an atom of either measure."""
    grid = np.union1d(mu.atoms, nu.atoms)
    return float(np.abs(mu.cdf(grid) - nu.cdf(grid)).max())


def ks_two_sample(a, b):
    """KS distance between the empirical laws of two samples."""
    return ks_distance(EmpiricalMeasure.from_samples(a), EmpiricalMeasure.from_samples(b))


def shift_nonnegative(mu):
    return mu.shift_nonnegative()


def width(mu):
    return mu.width


def rescale_profile(profile, a, n=None):
    """mu_a: mass 1/n at every profile value divided by (a n)^(1/4).

    ``n`` defaults to the number of profile entries.
    """
    values = np.asarray(getattr(profile, "values", profile), dtype=float)
    if values.size == 0:
        raise ValueError("empty profile")
    if a <= 0:
        raise ValueError("rescale constant must be positive")
    size = values.size if n is None else n
    return EmpiricalMeasure.from_samples(values / (a * size) ** 0.25)


def mixture(measures):
    """Equal-weight average of several measures."""
    atoms = np.concatenate([m.atoms for m in measures])
    masses = np.concatenate([m.masses for m in measures]) / len(measures)
    return EmpiricalMeasure(atoms, masses / masses.sum())
