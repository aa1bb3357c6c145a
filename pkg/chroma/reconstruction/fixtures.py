# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Measures and reductions that let Alice run at small k, where no closed
form candidate is available.
"""
import logging
from collections import namedtuple

import numpy as np

from chroma.core.errors import DominanceFailure, PreconditionError
from chroma.core.rng import as_generator
from chroma.dynamics.population import reduced_step
from chroma.measures.empirical import cdf_gap
from chroma.measures.star import StarMeasure, quantile_reduce
from chroma.trees.model import Poisson

logger = logging.getLogger(__name__)

Reductions = namedtuple('Reductions', 'q0 qstar qt')


def one_step_image(mu, law, k, n, rng, key='image'):
    """Empirical law of ``|Lambda Gamma_s mu|`` from ``n`` reduced steps"""
    sample = reduced_step(mu, law, k, n, rng, key=(key,))
    return StarMeasure.from_samples(sample.x_new, k=k)


def find_dominated(k, d, theta, n_iter, n, rng, law=None):
    """
    ``(1 - theta) delta_{1/k} + theta nu`` with ``nu`` the empirical law
    after ``n_iter`` steps from the frozen start, returned once its own
    one-step image dominates it within ``3/sqrt(n)``.

    :raises DominanceFailure: when the image falls below the measure,
        typically because ``d`` is below the freezing threshold
    """
    if not 0 <= theta <= 1:
        raise PreconditionError('theta must lie in [0, 1], got %r' % (theta,))
    rng = as_generator(rng)
    law = law or Poisson(d)
    trivial = StarMeasure.trivial(k)
    if theta == 0:
        return trivial

    pop = StarMeasure.frozen(k)
    for step in range(n_iter):
        pop = one_step_image(pop, law, k, n, rng, key='fixture-%d' % step)
    mu = trivial.mix(pop, theta)

    image = one_step_image(mu, law, k, n, rng, key='fixture-check')
    slack = 3.0 / np.sqrt(n)
    _, gap = cdf_gap(mu, image)
    worst = float(gap.min())
    logger.debug('find_dominated k=%d d=%g theta=%g worst gap %.5f', k, d,
                 theta, worst)
    if worst < -slack:
        raise DominanceFailure(
            'The one-step image does not dominate the fixture (worst CDF '
            'gap %.4f beyond %.4f); try a larger d or a smaller theta'
            % (worst, slack), worst_gap=worst)
    return mu


def build_reductions(mu_k, law, k, n_dom, rng, truncation=None):
    """
    ``(q0, qstar, qt)`` for :func:`run_alice`.

    ``q0`` pushes the frozen law onto ``mu_k``; ``qstar`` pushes the
    empirical one-step image under ``law`` onto it, and ``qt`` the image
    under ``truncation`` when that law is given.  Empirical images get a
    ``3/sqrt(n_dom)`` dominance slack.
    """
    rng = as_generator(rng)
    slack = 3.0 / np.sqrt(n_dom)
    q0 = quantile_reduce(StarMeasure.frozen(k), mu_k, k)
    image = one_step_image(mu_k, law, k, n_dom, rng, key='qstar')
    qstar = quantile_reduce(image, mu_k, k, slack=slack)
    qt = None
    if truncation is not None:
        image_t = one_step_image(mu_k, truncation, k, n_dom, rng, key='qt')
        qt = quantile_reduce(image_t, mu_k, k, slack=slack)
    return Reductions(q0, qstar, qt)
