# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
The stable limit of k-fold sums under ``mu_U``.

``U = e^{-Y}`` where ``Y`` has density ``gamma e^{delta y} / (k log k y^2)``
on ``(M, y_c]``, the upper end chosen for mass one.  With
``t_k = inf{t: mu_U([t, inf)) < 1/k}`` the normalized sum
``(1/t_k) sum_{i<=k} U_i`` approaches the Levy law of parameter pi/2 when
``delta = 1/2``.
"""
import logging
from collections import namedtuple

import numpy as np
from scipy import integrate, special, stats

from chroma.candidate.family import TailSampler
from chroma.candidate.params import solve_tail, tail_integral
from chroma.core import settings
from chroma.core.errors import PreconditionError

logger = logging.getLogger(__name__)

TailRow = namedtuple('TailRow', 'z empirical bound holds')

# Default exceedance level, in units of t_k, above which draws are exact
OMEGA = 1e-3

# KS to the Levy law levels off near 0.09 for k in 1e3..1e6; the finite-k
# correction decays like 1/log k
STABLE_KS_TOL = 0.12


def t_k_log(params, k):
    """``y_t = -log t_k``, solving ``gamma I(M, y_t) = log k``"""
    return solve_tail(params.delta, params.bigm, np.log(k) / params.gamma)


def t_k_threshold(params, k):
    """``t_k`` by root-finding on the ``mu_U`` tail"""
    return float(np.exp(-t_k_log(params, k)))


def c_k_log(params, k):
    """``-log c_k``: the cut giving ``mu_U`` mass one"""
    return solve_tail(params.delta, params.bigm,
                      k * np.log(k) / params.gamma)


def c_k_threshold(params, k):
    """Lower end ``c_k`` of the support of ``mu_U``"""
    return float(np.exp(-c_k_log(params, k)))


def t_k_asymptotic(params, k):
    """``(gamma delta / (log k (log log k)^2))^{1/delta}``"""
    log_k = np.log(k)
    return float((params.gamma * params.delta /
                  (log_k * np.log(log_k) ** 2)) ** (1.0 / params.delta))


def levy_cdf(c):
    """
    ``P(U <= c)`` for the Levy law of parameter pi/2, that is
    ``erfc(sqrt(pi / c) / 2)``; 0 for ``c <= 0``.

    >>> round(float(levy_cdf(np.pi / 2)), 6)
    0.317311
    """
    c = np.asarray(c, dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        value = special.erfc(0.5 * np.sqrt(np.pi / c))
    return np.where(c > 0, value, 0.0)


class StableSums(object):
    """
    Sampler of ``(1/t_k) sum_{i<=k} U_i``.

    Summands with ``U >= omega t_k`` are counted with a binomial and drawn
    exactly; the rest enter through a normal approximation with their
    exact conditional mean and variance.
    """

    def __init__(self, params, k, omega=OMEGA):
        if k < 3:
            raise PreconditionError('Stable sums need k >= 3')
        self.params = params
        self.k = int(k)
        self.y_t = t_k_log(params, k)
        self.y_c = c_k_log(params, k)
        self.t_k = float(np.exp(-self.y_t))
        delta, bigm = params.delta, params.bigm
        total = tail_integral(delta, bigm, self.y_c, 'closed')

        y_w = self.y_t - np.log(omega)
        if y_w >= self.y_c:
            y_w = self.y_c
        self.y_w = y_w
        self.p_exceed = min(1.0, tail_integral(delta, bigm, y_w, 'closed') /
                            total)
        self.exceed = TailSampler(delta, bigm, y_w)

        self.bulk_mean = self.bulk_var = 0.0
        if y_w < self.y_c:
            bulk = tail_integral(delta, y_w, self.y_c, 'closed')
            m1 = self._moment(1) / bulk
            m2 = self._moment(2) / bulk
            self.bulk_mean, self.bulk_var = m1, max(m2 - m1 ** 2, 0.0)
        logger.debug('Stable sums k=%d t_k=%.6g p_exceed=%.6g', k, self.t_k,
                     self.p_exceed)

    def _moment(self, order):
        # int (e^{y_t - y})^order e^{delta y} / y^2 over the bulk
        delta, y_t = self.params.delta, self.y_t

        def integrand(y):
            return np.exp(delta * y + order * (y_t - y)) / y ** 2

        value, _ = integrate.quad(integrand, self.y_w, self.y_c,
                                  epsrel=settings.QUAD_RTOL, limit=400)
        return value

    def sample(self, size, rng):
        counts = rng.binomial(self.k, self.p_exceed, size)
        owner = np.repeat(np.arange(size), counts)
        draws = self.exceed.sample(int(counts.sum()), rng)
        exact = np.bincount(owner, weights=np.exp(self.y_t - draws),
                            minlength=size)
        rest = self.k - counts
        bulk = rest * self.bulk_mean + \
            np.sqrt(rest * self.bulk_var) * rng.standard_normal(size)
        return exact + np.maximum(bulk, 0.0)

    def tail_bound(self, z):
        """``k mu_U([z t_k, inf))``"""
        edge = min(self.y_t - np.log(z), self.y_c)
        if edge <= self.params.bigm:
            return 0.0
        return self.params.gamma / np.log(self.k) * \
            tail_integral(self.params.delta, self.params.bigm, edge, 'closed')


def stable_law_test(params, k, n, rng, omega=OMEGA):
    """KS distance between ``n`` normalized sums and :func:`levy_cdf`"""
    if n < 1:
        raise PreconditionError('stable_law_test needs n >= 1')
    if params.delta != 0.5:
        raise PreconditionError('The Levy limit needs delta = 1/2')
    samples = StableSums(params, k, omega).sample(n, rng)
    statistic = float(stats.kstest(samples, levy_cdf).statistic)
    logger.info('Stable law k=%d n=%d KS=%.5f', k, n, statistic)
    return statistic


def sum_tail_profile(params, k, n, zs, rng, omega=OMEGA):
    """
    ``P(sum U >= z t_k)`` against ``min(1, (1 + eps) k mu_U([z t_k, inf)))
    + eps/log k`` at each ``z``.
    """
    sums = StableSums(params, k, omega)
    samples = np.sort(sums.sample(n, rng))
    rows = []
    for z in zs:
        empirical = 1.0 - np.searchsorted(samples, z, side='left') / float(n)
        bound = min(1.0, (1.0 + params.eps) * sums.tail_bound(z)) + \
            params.eps / np.log(k)
        rows.append(TailRow(float(z), float(empirical), float(bound),
                            bool(empirical <= bound)))
    return rows
