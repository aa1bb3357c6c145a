# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Weighted-atom measures on the extended real line and their algebra:
convolution, compound sums, cuts and stochastic dominance.
"""
import logging

import numpy as np

from chroma.core import settings
from chroma.core.errors import PreconditionError

logger = logging.getLogger(__name__)

# Largest support handled by exact convolution
EXACT_SUPPORT = 1000


class EmpiricalMeasure(object):
    """
    Finite measure given by atoms ``points`` with weights ``weights``.

    Duplicate points are merged and zero weights dropped, so the support is
    strictly increasing.  Atoms at -inf and +inf are allowed.
    """

    def __init__(self, points, weights=None):
        points = np.asarray(points, dtype=float).ravel()
        if weights is None:
            weights = np.full(len(points), 1.0 / max(len(points), 1))
        weights = np.asarray(weights, dtype=float).ravel()
        if points.shape != weights.shape:
            raise PreconditionError('Got %d points and %d weights'
                                    % (len(points), len(weights)))
        if np.isnan(points).any() or (weights < 0).any() or \
                not np.isfinite(weights).all():
            raise PreconditionError('Points must not be NaN and weights '
                                    'must be finite and nonnegative')
        keep = weights > 0
        points, weights = points[keep], weights[keep]
        self.points, inverse = np.unique(points, return_inverse=True)
        self.weights = np.bincount(inverse.ravel(), weights=weights,
                                   minlength=len(self.points))
        self._cumulative = np.cumsum(self.weights)

    @classmethod
    def from_samples(cls, samples):
        """Equal weights ``1/N`` on each sample"""
        samples = np.asarray(samples, dtype=float).ravel()
        return cls(samples, np.full(len(samples), 1.0 / len(samples)))

    @classmethod
    def point_mass(cls, point, mass=1.0):
        """``mass`` times the Dirac measure at ``point``"""
        return cls([point], [mass])

    @property
    def mass(self):
        """Total weight"""
        return float(self._cumulative[-1]) if len(self.points) else 0.0

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return '<EmpiricalMeasure %d atoms mass=%r>' % (len(self), self.mass)

    def cdf(self, x):
        """Right-continuous distribution function, ``mu((-inf, x])``"""
        idx = np.searchsorted(self.points, x, side='right')
        return np.concatenate(([0.0], self._cumulative))[idx]

    def cdf_left(self, x):
        """``mu((-inf, x))``"""
        idx = np.searchsorted(self.points, x, side='left')
        return np.concatenate(([0.0], self._cumulative))[idx]

    def quantile(self, level):
        """Smallest support point with cdf at least ``level``"""
        level = np.asarray(level, dtype=float)
        idx = np.searchsorted(self._cumulative, level - settings.CDF_TOL,
                              side='left')
        return self.points[np.minimum(idx, len(self.points) - 1)]

    def normalized(self):
        """Copy scaled to mass 1"""
        return EmpiricalMeasure(self.points, self.weights / self.mass)

    def scaled(self, factor):
        """Copy with every weight multiplied by ``factor``"""
        return EmpiricalMeasure(self.points, self.weights * factor)

    def map(self, func):
        """Push forward through ``func``"""
        return EmpiricalMeasure(func(self.points), self.weights)

    def restrict(self, mask):
        """Sub-measure on the atoms selected by ``mask``"""
        mask = np.asarray(mask, dtype=bool)
        return EmpiricalMeasure(self.points[mask], self.weights[mask])

    def mean(self):
        """Mean of the normalized measure"""
        return float(np.dot(self.points, self.weights / self.mass))

    def sample(self, size, rng):
        """Draw from the normalized measure"""
        if not len(self.points):
            raise PreconditionError('Cannot sample an empty measure')
        draws = rng.random(size) * self.mass
        idx = np.searchsorted(self._cumulative, draws, side='right')
        return self.points[np.minimum(idx, len(self.points) - 1)]

    def mix(self, other, weight):
        """``(1 - weight) * self + weight * other``"""
        return EmpiricalMeasure(
            np.concatenate((self.points, other.points)),
            np.concatenate(((1.0 - weight) * self.weights,
                            weight * other.weights)))

    def __add__(self, other):
        return EmpiricalMeasure(np.concatenate((self.points, other.points)),
                                np.concatenate((self.weights, other.weights)))


def _add_points(first, second):
    with np.errstate(invalid='ignore'):
        total = first + second
    if np.isnan(total).any():
        raise PreconditionError('Sum of +inf and -inf atoms is undefined')
    return total


def oplus(a, b, n_samples=None, rng=None):
    """
    Law of the sum of independent draws from ``a`` and ``b``.

    Exact when both supports have at most 1000 points, Monte Carlo with
    ``n_samples`` draws otherwise.
    """
    if len(a) <= EXACT_SUPPORT and len(b) <= EXACT_SUPPORT:
        points = _add_points(a.points[:, None], b.points[None, :])
        weights = a.weights[:, None] * b.weights[None, :]
        return EmpiricalMeasure(points.ravel(), weights.ravel())
    if not n_samples or rng is None:
        raise PreconditionError('Monte Carlo convolution needs n_samples '
                                'and rng')
    return EmpiricalMeasure.from_samples(
        _add_points(a.sample(n_samples, rng), b.sample(n_samples, rng)))


def compound_sums(counts, b, rng):
    """Per-entry sums of ``counts[i]`` independent draws from ``b``"""
    counts = np.asarray(counts, dtype=np.int64)
    total = int(counts.sum())
    if total == 0:
        return np.zeros(len(counts))
    owner = np.repeat(np.arange(len(counts)), counts)
    return np.bincount(owner, weights=b.sample(total, rng),
                       minlength=len(counts))


def otimes(count_law, b, rng, n_samples=None):
    """
    Law of the sum of N independent draws from ``b``.

    :param count_law: an integer count or an object with
        ``sample(rng, size)`` such as the offspring laws
    """
    if isinstance(count_law, (int, np.integer)):
        if count_law == 0:
            return EmpiricalMeasure.point_mass(0.0)
        counts = np.full(n_samples or settings.POPULATION_SIZE, count_law)
    else:
        counts = count_law.sample(rng, n_samples or settings.POPULATION_SIZE)
    return EmpiricalMeasure.from_samples(compound_sums(counts, b, rng))


def _cut(mu, keep_low):
    if mu.mass < 1.0 - settings.CDF_TOL:
        raise PreconditionError('Cannot cut a measure of mass %r below 1'
                                % mu.mass)
    if abs(mu.mass - 1.0) <= settings.CDF_TOL:
        return mu, (np.inf if keep_low else -np.inf)

    points, weights = mu.points, mu.weights
    if not keep_low:
        points, weights = points[::-1], weights[::-1]
    cumulative = np.cumsum(weights)
    idx = int(np.searchsorted(cumulative, 1.0 - settings.CDF_TOL,
                              side='left'))
    before = cumulative[idx - 1] if idx else 0.0
    kept_points = points[:idx + 1]
    kept_weights = np.concatenate((weights[:idx], [1.0 - before]))
    return EmpiricalMeasure(kept_points, kept_weights), float(points[idx])


def cut_above(mu):
    """
    Keep the lowest unit of mass of ``mu``.

    Returns the cut measure and the threshold ``a``; an atom at ``a`` is
    split.  Measures of mass one come back unchanged with ``a = +inf``.
    """
    return _cut(mu, keep_low=True)


def cut_below(mu):
    """Keep the highest unit of mass; mirror image of :func:`cut_above`"""
    return _cut(mu, keep_low=False)


def _merged_grid(mu, nu):
    points = [np.asarray(mu.points), np.asarray(nu.points)]
    return np.union1d(*points)


def cdf_gap(mu, nu):
    """``(grid, F_mu - F_nu)`` on the merged support"""
    grid = _merged_grid(mu, nu)
    return grid, mu.cdf(grid) / mu.mass - nu.cdf(grid) / nu.mass


def dominates(mu, nu, slack=0.0):
    """
    True when ``nu`` stochastically dominates ``mu``.

    Checks ``F_mu(x) >= F_nu(x) - slack`` at every support point of both
    measures.
    """
    _, gap = cdf_gap(mu, nu)
    return bool((gap >= -settings.CDF_TOL - slack).all())


def dominates_by_eps(mu, nu, eps):
    """
    True when ``nu`` dominates ``mu`` by ``eps``: at each support point
    either ``F_mu = 1``, ``F_nu = 0`` or ``F_mu - eps >= F_nu``.
    """
    grid = _merged_grid(mu, nu)
    f_mu = mu.cdf(grid) / mu.mass
    f_nu = nu.cdf(grid) / nu.mass
    ok = (f_mu >= 1.0 - settings.CDF_TOL) | (f_nu <= settings.CDF_TOL) | \
        (f_mu - eps >= f_nu - settings.CDF_TOL)
    return bool(ok.all())


def ks_distance(mu, nu):
    """Sup distance between the two distribution functions"""
    _, gap = cdf_gap(mu, nu)
    return float(np.abs(gap).max()) if len(gap) else 0.0
