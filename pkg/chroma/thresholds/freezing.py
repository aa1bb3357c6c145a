# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Freezing thresholds of the colouring model and the comparator curves
around them.

Poisson trees freeze above ``inf_x (k-1) x / (1 - e^-x)^k``, d-ary trees
above ``inf_x x / |log(1 - (1 - e^-x)^k / (k-1))|``.
"""
import logging
from collections import OrderedDict, namedtuple

import numpy as np
from scipy import optimize

from chroma.core.errors import PreconditionError, RootFindingError

logger = logging.getLogger(__name__)

MODELS = ('poisson', 'dary')

ThresholdReport = namedtuple('ThresholdReport',
                             'k model d_f x_star asymptotic')

SweepRow = namedtuple(
    'SweepRow', 'k model d_f x_star non_reconstruction freezing_asymptotic '
    'main_theorem_form kesten_stigum')

# Points of the coarse scan preceding the golden section search
SCAN_POINTS = 1000


def _power(x, k):
    # (1 - e^-x)^k
    return np.exp(k * np.log1p(-np.exp(-np.asarray(x, dtype=float))))


def poisson_objective(x, k):
    """``(k - 1) x / (1 - e^-x)^k``"""
    return (k - 1) * np.asarray(x, dtype=float) / _power(x, k)


def dary_objective(x, k):
    """``x / |log(1 - (1 - e^-x)^k / (k - 1))|``"""
    with np.errstate(divide='ignore'):
        return np.asarray(x, dtype=float) / \
            np.abs(np.log1p(-_power(x, k) / (k - 1)))


OBJECTIVES = {'poisson': poisson_objective, 'dary': dary_objective}


def objective(model):
    try:
        return OBJECTIVES[model]
    except KeyError:
        raise PreconditionError('Unknown model %r, expected one of %s'
                                % (model, ', '.join(MODELS)))


def freezing_threshold(k, model='poisson'):
    """
    Minimize the freezing objective: a log-spaced scan over
    ``[1e-3, 10 log k]`` brackets the minimum, golden section refines it.
    """
    if k < 3:
        raise PreconditionError('Freezing thresholds need k >= 3')
    func = objective(model)
    grid = np.geomspace(1e-3, 10 * np.log(k), SCAN_POINTS)
    values = func(grid, k)
    best = int(np.argmin(values))
    if best in (0, len(grid) - 1):
        raise RootFindingError('Scan minimum of the %s objective at the '
                               'edge x=%g for k=%d' % (model, grid[best], k))

    res = optimize.minimize_scalar(
        lambda x: float(func(x, k)),
        bracket=(grid[best - 1], grid[best], grid[best + 1]),
        method='golden', tol=1e-8)
    x_star, d_f = float(res.x), float(res.fun)
    if d_f > values[best]:
        x_star, d_f = float(grid[best]), float(values[best])
    for side in (1 - 1e-4, 1 + 1e-4):
        if func(x_star * side, k) < d_f:
            raise RootFindingError('Minimizer certificate failed for %s '
                                   'k=%d at x=%r' % (model, k, x_star))
    report = ThresholdReport(int(k), model, d_f, x_star,
                             freezing_asymptotic(k))
    logger.debug('Freezing %s k=%d d_f=%.10g x*=%.10g', model, k, d_f,
                 x_star)
    return report


def freezing_asymptotic(k):
    """``k (log k + log log k + 1)``"""
    return k * (np.log(k) + np.log(np.log(k)) + 1.0)


def regime_bounds(k, beta=1.0):
    """
    Comparator curves with the ``o(1)`` terms dropped; ``beta = 1`` gives
    back the freezing curve.
    """
    if k < 3:
        raise PreconditionError('Regime bounds need k >= 3')
    base = np.log(k) + np.log(np.log(k))
    return OrderedDict((
        ('non_reconstruction', k * (base + 1.0 - np.log(2.0))),
        ('freezing_asymptotic', k * (base + 1.0)),
        ('main_theorem_form', k * (base + beta)),
        ('kesten_stigum', float((k - 1) ** 2)),
    ))


def freezing_sweep(ks, model='poisson', beta=1.0):
    """One :class:`SweepRow` per ``k``"""
    rows = []
    for k in ks:
        report = freezing_threshold(k, model)
        bounds = regime_bounds(k, beta)
        rows.append(SweepRow(report.k, model, report.d_f, report.x_star,
                             **bounds))
        logger.info('Freezing %s k=%d d_f=%.6g ratio=%.6f', model, k,
                    report.d_f, report.d_f / bounds['freezing_asymptotic'])
    return rows
