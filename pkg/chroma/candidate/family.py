# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
The candidate fixed point in phi-space.

``nu_star = kappa delta_0 + (1 - kappa) delta_alpha + nu_r`` where the tail
``nu_r`` has density ``gamma e^{delta y} / y^2`` on ``(M, inf)``, and
``nu_k = nu_star 1{y <= a_k} / log k`` with ``a_k`` chosen for mass one.
Tilted parts use ``phi_inv(y)`` (the ``=`` part) and its complement (the
``!=`` part).  Tails are sampled by inverse CDF, tilted tails by rejection.
"""
import logging

import numpy as np
from numpy.polynomial.laguerre import laggauss
from scipy import integrate
from scipy.interpolate import PchipInterpolator

from chroma.candidate.params import antiderivative, solve_tail, \
    tail_integral
from chroma.core import settings
from chroma.core.errors import PreconditionError, RootFindingError
from chroma.measures.star import phi_inv

logger = logging.getLogger(__name__)

HANDLES = ('nu_k', 'nu_r', 'nu_k_eq', 'nu_k_neq', 'nu_r_neq')

# Nodes of the inverse-CDF spline
SPLINE_GRID = 1024

NEWTON_STEPS = 4


def _neq_integrand(y, delta, k):
    # e^{delta y} / (y^2 (e^y + 1/(k-1))), written to stay finite at large y
    return np.exp((delta - 1.0) * y) / \
        (y ** 2 * (1.0 + np.exp(-y) / (k - 1.0)))


def neq_integral(delta, k, lo, hi=np.inf):
    """``int_lo^hi e^{delta y} / (y^2 (e^y + 1/(k-1))) dy`` by quadrature"""
    if hi <= lo:
        return 0.0
    value, _ = integrate.quad(_neq_integrand, lo, hi, args=(delta, k),
                              epsrel=settings.QUAD_RTOL, limit=400)
    return value


def neq_integral_laguerre(delta, k, lo, nodes=100):
    """
    The same integral up to infinity by Gauss-Laguerre after
    ``y = lo + s / (1 - delta)``.
    """
    s, w = laggauss(nodes)
    rate = 1.0 - delta
    y = lo + s / rate
    h = np.exp(-rate * lo) / \
        (rate * y ** 2 * (1.0 + np.exp(-y) / (k - 1.0)))
    return float(np.dot(w, h))


def p_r_neq(delta, bigm, k, rule='quad'):
    """``(1/gamma) nu_r^!=([M, inf))``"""
    if rule == 'laguerre':
        return neq_integral_laguerre(delta, k, bigm)
    return neq_integral(delta, k, bigm)


class TailSampler(object):
    """
    Inverse-CDF sampler of the density proportional to ``e^{delta y}/y^2``
    on ``(lo, hi]``.

    A monotone spline through the CDF on a geometric grid gives the
    starting point, a few Newton steps on the closed-form CDF polish it.
    """

    def __init__(self, delta, lo, hi):
        if not lo < hi < np.inf:
            raise PreconditionError('Tail needs lo < hi < inf, got (%r, %r]'
                                    % (lo, hi))
        self.delta = delta
        self.lo = lo
        self.hi = hi
        self._base = float(antiderivative(delta, lo))
        self.total = float(antiderivative(delta, hi)) - self._base
        grid = np.geomspace(lo, hi, SPLINE_GRID)
        levels = self.cdf(grid)
        levels[0], levels[-1] = 0.0, 1.0
        if not (np.diff(levels) > 0).all():
            raise RootFindingError('Tail CDF is not monotone on its grid '
                                   '(%r, %r]' % (lo, hi))
        self._inverse = PchipInterpolator(levels, grid)

    def __repr__(self):
        return '<TailSampler delta=%r (%r, %r]>' % (self.delta, self.lo,
                                                     self.hi)

    def density(self, y):
        """Normalized density"""
        y = np.asarray(y, dtype=float)
        return np.exp(self.delta * y) / y ** 2 / self.total

    def cdf(self, y):
        y = np.clip(np.asarray(y, dtype=float), self.lo, self.hi)
        return (antiderivative(self.delta, y) - self._base) / self.total

    def invert(self, levels):
        """Quantiles, accurate to about 1e-8 in level"""
        y = np.clip(self._inverse(levels), self.lo, self.hi)
        for _ in range(NEWTON_STEPS):
            y = np.clip(y - (self.cdf(y) - levels) / self.density(y),
                        self.lo, self.hi)
        return y

    def sample(self, size, rng):
        draws = self.invert(rng.random(size))
        # keep the open lower end
        return np.where(draws <= self.lo, np.nextafter(self.lo, np.inf),
                        draws)


def _rejection(size, rng, propose, accept):
    out = np.empty(size)
    filled = 0
    while filled < size:
        need = size - filled
        candidates = propose(need + need // 4 + 16, rng)
        kept = candidates[rng.random(len(candidates)) < accept(candidates)]
        kept = kept[:need]
        out[filled:filled + len(kept)] = kept
        filled += len(kept)
    return out


class EqTailSampler(object):
    """Tail density tilted by ``phi_inv(y)``, by rejection from the tail"""

    def __init__(self, tail, k):
        self.tail = tail
        self.k = k

    def _accept(self, y):
        return phi_inv(y, self.k)

    def sample(self, size, rng):
        return _rejection(size, rng, self.tail.sample, self._accept)


class NeqTailSampler(object):
    """
    Density proportional to ``e^{delta y} / (y^2 (e^y + 1/(k-1)))`` on
    ``(lo, hi]``.

    Proposals come from the exponential law of rate ``1 - delta`` cut to
    the interval; they are accepted with probability
    ``(lo/y)^2 / (1 + e^-y/(k-1))``.
    """

    def __init__(self, delta, lo, k, hi=np.inf):
        self.rate = 1.0 - delta
        self.lo = lo
        self.hi = hi
        self.k = k
        self._span = -np.expm1(-self.rate * (hi - lo)) if hi < np.inf \
            else 1.0

    def _propose(self, size, rng):
        return self.lo - np.log1p(-rng.random(size) * self._span) / self.rate

    def _accept(self, y):
        return (self.lo / y) ** 2 / (1.0 + np.exp(-y) / (self.k - 1.0))

    def sample(self, size, rng):
        return _rejection(size, rng, self._propose, self._accept)


def mixture(size, rng, parts):
    """
    Draws from a finite mixture.

    :param parts: ``(weight, component)`` pairs, the component being a
        float atom or a callable ``(size, rng)``
    """
    parts = list(parts)
    weights = np.array([weight for weight, _ in parts], dtype=float)
    cumulative = np.cumsum(weights / weights.sum())
    label = np.minimum(np.searchsorted(cumulative, rng.random(size),
                                       side='right'), len(parts) - 1)
    out = np.empty(size)
    for index, (weight, component) in enumerate(parts):
        mask = label == index
        count = int(mask.sum())
        if not count or not weight > 0:
            continue
        if callable(component):
            out[mask] = component(count, rng)
        else:
            out[mask] = component
    return out


class NuFamily(object):
    """
    ``nu_k`` and its derived parts for one ``(params, k)``.

    Acts as a probability measure on phi-values: ``cdf`` is exact and
    ``points`` lists the atoms and the tail ends.
    """

    def __init__(self, params, k, a_k):
        self.params = params
        self.k = int(k)
        self.log_k = np.log(k)
        self.alpha = params.alpha(k)
        self.a_k = a_k
        self.tail = TailSampler(params.delta, params.bigm, a_k)
        self._tails = {}

        gamma, kappa = params.gamma, params.kappa
        self.zero_mass = kappa / self.log_k
        self.alpha_mass = (1.0 - kappa) / self.log_k
        self.tail_mass = gamma * self.tail.total / self.log_k

        self.tail_neq_integral = neq_integral(params.delta, k, params.bigm,
                                              a_k)
        self.p_r_neq = p_r_neq(params.delta, params.bigm, k)
        self.eq_parts = (
            kappa / (k * self.log_k),
            (1.0 - kappa) * (0.5 - params.alpha0) / self.log_k,
            gamma * (self.tail.total - self.tail_neq_integral) / self.log_k)
        self.neq_parts = (
            kappa * (1.0 - 1.0 / k) / self.log_k,
            (1.0 - kappa) * (0.5 + params.alpha0) / self.log_k,
            gamma * self.tail_neq_integral / self.log_k)
        self.p_k_neq = float(sum(self.neq_parts))

        self.eq_tail = EqTailSampler(self.tail, self.k)
        self.neq_tail = NeqTailSampler(params.delta, params.bigm, self.k,
                                        a_k)
        self.neq_r_tail = NeqTailSampler(params.delta, params.bigm, self.k)

    def __repr__(self):
        return '<NuFamily k=%d a_k=%.6g>' % (self.k, self.a_k)

    @property
    def mass(self):
        return self.zero_mass + self.alpha_mass + self.tail_mass

    @property
    def points(self):
        return np.array([0.0, self.alpha, self.params.bigm, self.a_k])

    def cdf(self, y):
        y = np.asarray(y, dtype=float)
        return self.zero_mass * (y >= 0) + self.alpha_mass * (y >= self.alpha) \
            + self.tail_mass * np.where(y > self.params.bigm,
                                        self.tail.cdf(y), 0.0)

    def tail_sampler(self, hi):
        """Cached :class:`TailSampler` on ``(M, hi]``"""
        if hi not in self._tails:
            self._tails[hi] = TailSampler(self.params.delta,
                                          self.params.bigm, hi)
        return self._tails[hi]

    def cut_tail(self, target):
        """Tail sampler cut where ``I(M, a) = target``"""
        hi = solve_tail(self.params.delta, self.params.bigm, target)
        return self.tail_sampler(hi)

    def sample(self, handle, size, rng):
        """Draws from the normalized measure named by ``handle``"""
        if handle == 'nu_k':
            return mixture(size, rng, ((self.zero_mass, 0.0),
                                       (self.alpha_mass, self.alpha),
                                       (self.tail_mass, self.tail.sample)))
        if handle == 'nu_r':
            return self.tail.sample(size, rng)
        if handle == 'nu_k_eq':
            return mixture(size, rng, zip(self.eq_parts, (
                0.0, self.alpha, self.eq_tail.sample)))
        if handle == 'nu_k_neq':
            return mixture(size, rng, zip(self.neq_parts, (
                0.0, self.alpha, self.neq_tail.sample)))
        if handle == 'nu_r_neq':
            return self.neq_r_tail.sample(size, rng)
        raise PreconditionError('Unknown handle %r, expected one of %s'
                                % (handle, ', '.join(HANDLES)))

    def source(self):
        return NuSource(self)


class NuSource(object):
    """
    Tilted arrival laws of ``nu_k`` in the shape the reduced step expects:
    the zero fraction of each tilt and samplers of the nonzero part.
    """

    def __init__(self, family):
        self.k = family.k
        self.p_neq = family.p_k_neq
        eq, neq = family.eq_parts, family.neq_parts
        self.eq_zero = eq[0] / sum(eq)
        self.neq_zero = neq[0] / sum(neq)
        self._eq = ((eq[1], family.alpha), (eq[2], family.eq_tail.sample))
        self._neq = ((neq[1], family.alpha), (neq[2],
                                              family.neq_tail.sample))

    def sample_eq(self, size, rng):
        return mixture(size, rng, self._eq) if size else np.empty(0)

    def sample_neq(self, size, rng):
        return mixture(size, rng, self._neq) if size else np.empty(0)


def build_candidate(params, k, check=False):
    """
    Solve ``gamma I(M, a_k) = log k - 1`` and build the family.

    With ``check`` every integral is recomputed by a second rule and a
    disagreement above 1e-8 raises :class:`RootFindingError`.
    """
    if k < 3:
        raise PreconditionError('The candidate needs k >= 3')
    if not params.bigm > 2.0 / params.delta:
        raise PreconditionError('The candidate needs M > 2/delta, got M=%r'
                                % params.bigm)
    deficit = np.log(k) - 1.0
    if not deficit > 0:
        raise RootFindingError('nu_k cannot reach mass 1: atoms carry %r '
                               'of it' % (1.0 / np.log(k)))
    a_k = solve_tail(params.delta, params.bigm, deficit / params.gamma)
    family = NuFamily(params, k, a_k)
    logger.debug('Built %r alpha=%.6g p_r_neq=%.6g p_k_neq=%.6g', family,
                 family.alpha, family.p_r_neq, family.p_k_neq)

    if abs(family.mass - 1.0) > 1e-9:
        raise RootFindingError('nu_k has mass %r' % family.mass)
    if check:
        pairs = (
            ('I(M, a_k)', tail_integral(params.delta, params.bigm, a_k),
             family.tail.total),
            ('p_r_neq', family.p_r_neq,
             p_r_neq(params.delta, params.bigm, k, 'laguerre')))
        for name, first, second in pairs:
            if abs(first - second) > 1e-8 * max(1.0, abs(first)):
                raise RootFindingError('Quadrature rules disagree on %s: '
                                       '%r vs %r' % (name, first, second))
    return family


def sample_nu(family, handle, size, rng):
    """``size`` draws from ``family`` under ``handle``"""
    return family.sample(handle, size, rng)

