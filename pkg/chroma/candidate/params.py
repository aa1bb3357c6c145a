# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Parameters of the candidate family and the tail integral
``I(a, b) = int_a^b e^{delta y} / y^2 dy`` they are built from.
"""
import logging
from collections import OrderedDict

import numpy as np
from scipy import integrate, optimize, special

from chroma.core import settings
from chroma.core.errors import PreconditionError, RootFindingError
from chroma.measures.star import phi

logger = logging.getLogger(__name__)


class CandidateParams(object):
    """
    ``(delta, kappa, alpha0, M, sigma, gamma, eps, beta)``.

    Defaults follow the explicit recipe (``delta = kappa = 1/2``) and
    small values for the constants it leaves free.
    """
    FIELDS = ('delta', 'kappa', 'alpha0', 'bigm', 'sigma', 'gamma', 'eps',
              'beta')

    def __init__(self, delta=0.5, kappa=0.5, alpha0=0.05, bigm=8.0,
                 sigma=0.05, gamma=0.05, eps=0.05, beta=0.99):
        self.delta = float(delta)
        self.kappa = float(kappa)
        self.alpha0 = float(alpha0)
        self.bigm = float(bigm)
        self.sigma = float(sigma)
        self.gamma = float(gamma)
        self.eps = float(eps)
        self.beta = float(beta)
        problems = self.problems()
        if problems:
            raise PreconditionError('; '.join(problems))

    def problems(self):
        """Messages for every parameter outside its range"""
        res = []
        if not 0 < self.delta < 1:
            res.append('delta must lie in (0, 1)')
        if not 0 < self.kappa < 1:
            res.append('kappa must lie in (0, 1)')
        if not 0 < self.alpha0 < 0.5:
            res.append('alpha0 must lie in (0, 1/2)')
        for name in ('bigm', 'sigma', 'gamma', 'eps'):
            if not getattr(self, name) > 0:
                res.append('%s must be positive' % name)
        if not 0 < self.beta <= 1:
            res.append('beta must lie in (0, 1]')
        return res

    def as_dict(self):
        """Ordered field values"""
        return OrderedDict((name, getattr(self, name)) for name in self.FIELDS)

    def __repr__(self):
        return 'CandidateParams(%s)' % ', '.join(
            '%s=%r' % item for item in self.as_dict().items())

    def __eq__(self, other):
        return isinstance(other, CandidateParams) and \
            self.as_dict() == other.as_dict()

    def __hash__(self):
        return hash(tuple(self.as_dict().values()))

    def alpha(self, k):
        """``phi(1/2 - alpha0)``, the location of the second atom"""
        return float(phi(0.5 - self.alpha0, k))

    def big_d(self, k):
        """``D = log k + log log k + beta``"""
        return np.log(k) + np.log(np.log(k)) + self.beta

    def degree(self, k):
        """Mean offspring ``d = (k - 1) D``"""
        return (k - 1) * self.big_d(k)

    def c_m(self):
        """The fitted constant ``C_M = 8 / M``"""
        return 8.0 / self.bigm

    def c_z(self, k):
        """``(1 + alpha0)(1 + C_M gamma) exp(kappa (e^{-alpha delta} - 1))``"""
        return (1 + self.alpha0) * (1 + self.c_m() * self.gamma) * \
            np.exp(self.kappa * (np.exp(-self.alpha(k) * self.delta) - 1))


def antiderivative(delta, y):
    """``-e^{delta y}/y + delta Ei(delta y)``, a primitive of the integrand"""
    y = np.asarray(y, dtype=float)
    return -np.exp(delta * y) / y + delta * special.expi(delta * y)


def tail_integral(delta, lo, hi, rule='quad'):
    """
    ``int_lo^hi e^{delta y}/y^2 dy`` by adaptive quadrature or, with
    ``rule='closed'``, through the exponential integral.
    """
    if hi <= lo:
        return 0.0
    if rule == 'closed':
        return float(antiderivative(delta, hi) - antiderivative(delta, lo))
    value, _ = integrate.quad(lambda y: np.exp(delta * y) / y ** 2, lo, hi,
                              epsrel=settings.QUAD_RTOL, limit=400)
    return value


def solve_tail(delta, lo, target):
    """
    Upper limit ``a`` with ``I(lo, a) = target``.

    The integral diverges, so a root always exists for a positive target.
    """
    if not target > 0:
        raise RootFindingError('Tail target must be positive, got %r'
                               % (target,))
    width = 1.0
    while tail_integral(delta, lo, lo + width, 'closed') < target:
        width *= 2.0
        if width > 1e4:
            raise RootFindingError('No tail limit reaches %r' % target)
    hi = optimize.brentq(
        lambda a: tail_integral(delta, lo, a, 'closed') - target,
        lo, lo + width, xtol=1e-14, rtol=1e-13, maxiter=500)
    logger.debug('Solved I(%g, a) = %g at a = %.12g', lo, target, hi)
    return hi
