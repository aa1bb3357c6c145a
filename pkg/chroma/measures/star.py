# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Star measures: laws on ``[1/k, 1]`` standing for symmetric laws on
Lambda^k, the phi transform and quantile reductions between them.
"""
import logging

import numpy as np

from chroma.core import settings
from chroma.core.errors import PreconditionError
from chroma.measures.empirical import EmpiricalMeasure, dominates

logger = logging.getLogger(__name__)


def phi(x, k):
    """
    ``log[(1 - (1-x)/(k-1)) / (1-x)]``, increasing from ``phi(0)`` to
    ``phi(1) = +inf`` with ``phi(1/k) = 0`` exactly.
    """
    x = np.asarray(x, dtype=float)
    if ((x < 0) | (x > 1)).any():
        raise PreconditionError('phi is defined on [0, 1]')
    with np.errstate(divide='ignore'):
        value = np.log1p((x - 1.0) / (k - 1)) - np.log1p(-x)
    return np.where(x == 1.0 / k, 0.0, value)


def phi_inv(y, k):
    """``1 - 1/(e^y + 1/(k-1))``, the inverse of :func:`phi`"""
    y = np.asarray(y, dtype=float)
    floor = np.log((k - 2.0) / (k - 1.0)) if k > 2 else -np.inf
    if (y < floor - 1e-12).any() or np.isnan(y).any():
        raise PreconditionError('phi_inv is defined on [%r, inf]' % floor)
    with np.errstate(over='ignore'):
        value = 1.0 - 1.0 / (np.exp(y) + 1.0 / (k - 1))
    return np.where(y == 0.0, 1.0 / k, np.clip(value, 0.0, 1.0))


def phi_inv_complement(y, k):
    """``1 - phi_inv(y)`` without cancellation"""
    with np.errstate(over='ignore'):
        return 1.0 / (np.exp(np.asarray(y, dtype=float)) + 1.0 / (k - 1))


class StarMeasure(EmpiricalMeasure):
    """
    Probability measure on ``[1/k, 1]``.

    Points within 1e-12 of ``1/k`` are snapped onto ``1/k`` so that the
    trivial fixed point stays exact under phi.
    """

    def __init__(self, points, weights=None, k=None):
        if k is None or k < 2:
            raise PreconditionError('StarMeasure needs k >= 2')
        floor = 1.0 / k
        points = np.asarray(points, dtype=float)
        if ((points < floor - 1e-12) | (points > 1.0 + 1e-12)).any():
            raise PreconditionError('Star measure support must lie in '
                                    '[1/%d, 1]' % k)
        points = np.where(np.abs(points - floor) <= 1e-12, floor,
                          np.clip(points, floor, 1.0))
        super(StarMeasure, self).__init__(points, weights)
        self.k = int(k)
        if abs(self.mass - 1.0) > 1e-9:
            raise PreconditionError('Star measure must have mass 1, got %r'
                                    % self.mass)

    @classmethod
    def from_samples(cls, samples, k=None):
        samples = np.asarray(samples, dtype=float).ravel()
        return cls(samples, np.full(len(samples), 1.0 / len(samples)), k=k)

    @classmethod
    def trivial(cls, k):
        """The uninformative fixed point, the point mass at ``1/k``"""
        return cls([1.0 / k], [1.0], k=k)

    @classmethod
    def frozen(cls, k):
        """The fully informative law, the point mass at 1"""
        return cls([1.0], [1.0], k=k)

    @classmethod
    def from_measure(cls, measure, k):
        """Wrap an EmpiricalMeasure supported on ``[1/k, 1]``"""
        return cls(measure.points, measure.weights / measure.mass, k=k)

    def __repr__(self):
        return '<StarMeasure k=%d %d atoms>' % (self.k, len(self))

    def phi_points(self):
        """phi of every support point"""
        return phi(self.points, self.k)

    def gap(self):
        """``E[x] - 1/k``"""
        return self.mean() - 1.0 / self.k

    def to_lambda_samples(self, size, rng):
        """``(values, argmax colours)``: a symmetric sample on Lambda^k"""
        return self.sample(size, rng), rng.integers(self.k, size=size)

    @classmethod
    def from_lambda_samples(cls, values, colours, k):
        """Forget the argmax colours of Lambda^k samples"""
        del colours
        return cls.from_samples(values, k=k)

    def mix(self, other, weight):
        return StarMeasure.from_measure(
            super(StarMeasure, self).mix(other, weight), self.k)


class QuantileReduction(object):
    """
    Reduction ``q(y, u)`` pushing ``mu1`` onto ``mu2`` with ``q <= y``.

    ``q(y, u) = inf{x >= 1/k: G2(x) >= G1(y-) + u (G1(y) - G1(y-))}``.
    """

    def __init__(self, mu1, mu2, k, slack=0.0):
        if not dominates(mu2, mu1, slack=slack):
            raise PreconditionError('quantile_reduce needs mu1 to dominate '
                                    'mu2')
        self.mu1 = mu1
        self.mu2 = mu2
        self.k = int(k)
        self.slack = slack

    def level(self, y, u):
        """``G1(y-) + u (G1(y) - G1(y-))`` on the mu1 scale"""
        low = self.mu1.cdf_left(y) / self.mu1.mass
        high = self.mu1.cdf(y) / self.mu1.mass
        return low + np.asarray(u) * (high - low)

    def __call__(self, y, u):
        y = np.asarray(y, dtype=float)
        level = self.level(y, u) * self.mu2.mass
        value = np.where(level <= settings.CDF_TOL, 1.0 / self.k,
                         np.maximum(self.mu2.quantile(level), 1.0 / self.k))
        return np.minimum(value, np.maximum(y, 1.0 / self.k))


def quantile_reduce(mu1, mu2, k=None, slack=0.0):
    """
    Build the reduction of ``mu1`` onto ``mu2``.

    ``slack`` loosens the dominance precondition for empirical inputs;
    outputs are clipped to ``q <= y`` in that case.
    """
    k = k or getattr(mu2, 'k', None) or getattr(mu1, 'k', None)
    if k is None:
        raise PreconditionError('quantile_reduce needs k')
    return QuantileReduction(mu1, mu2, k, slack)


def tq(q_fn, y, u, k):
    """
    Mixing weight ``(k y - q) / (k y - 1)`` with ``(1 - tq) y + tq / k = q``.

    Defined as 0 at ``y = 1/k``.
    """
    y = np.asarray(y, dtype=float)
    if ((y < 1.0 / k - 1e-12) | (y > 1.0 + 1e-12)).any():
        raise PreconditionError('tq needs y in (1/k, 1]')
    q = np.asarray(q_fn(y, u), dtype=float)
    denom = k * y - 1.0
    with np.errstate(divide='ignore', invalid='ignore'):
        weight = (k * y - k * q) / denom
    return np.where(denom <= 1e-12, 0.0, np.clip(weight, 0.0, 1.0))
