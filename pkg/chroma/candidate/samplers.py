# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Compound Poisson pieces of the fixed-point argument.

``S1 = alpha Pois(kappa)`` collects the atoms at ``alpha``, ``S0`` the
tail arrivals on the root colour, ``Z1~`` is the modified sum on one other
colour and ``W0~ = V~ - Z1~`` the variable whose law is compared with the
candidate.  Every sampler takes a built :class:`NuFamily`.
"""
import logging
from collections import namedtuple

import numpy as np

from chroma.candidate.family import mixture
from chroma.core.errors import PreconditionError
from chroma.measures.empirical import compound_sums

logger = logging.getLogger(__name__)

BoundGap = namedtuple('BoundGap', 'statistic tolerance n_nonzero holds')


def sample_S1(family, size, rng):
    """``alpha`` times a ``Pois(kappa)`` count"""
    return family.alpha * rng.poisson(family.params.kappa, size)


def s0_cut(family):
    """
    Upper cut ``a'`` of the ``S0`` summands: the tail rescaled by
    ``(1 + gamma) / (D - 1 - gamma)`` has mass one on ``(M, a']``.
    """
    params = family.params
    rate = params.big_d(family.k) - 1.0 - params.gamma
    if not rate > 0:
        raise PreconditionError('S0 needs D - 1 - gamma > 0')
    return rate, family.cut_tail(rate / ((1.0 + params.gamma) *
                                         params.gamma))


def sample_S0(family, size, rng):
    """``Pois(D - 1 - gamma)`` summands from the normalized, cut tail"""
    rate, tail = s0_cut(family)
    counts = rng.poisson(rate, size)
    return compound_sums(counts, tail, rng)


def sample_Z1_tilde(family, size, rng):
    """
    ``alpha Pois(kappa/2)`` plus ``Pois(gamma p_r!=)`` draws from the
    normalized ``!=`` tail on ``(M, inf)``.
    """
    params = family.params
    atoms = family.alpha * rng.poisson(params.kappa / 2.0, size)
    counts = rng.poisson(params.gamma * family.p_r_neq, size)
    return atoms + compound_sums(counts, family.neq_r_tail, rng)


def z1_zero_probability(family):
    """``P(Z1~ = 0) = exp(-kappa/2 - gamma p_r!=)``"""
    params = family.params
    return float(np.exp(-params.kappa / 2.0 - params.gamma * family.p_r_neq))


def v_tilde_masses(family):
    """
    ``(s1_mass, tail_mass, inf_mass)`` of the three parts of ``V~``.

    The tail carries ``s1_mass (1 + eps) C_Z`` times the tail density, cut
    so the total is one.
    """
    params = family.params
    s1_mass = np.exp(params.gamma + 1.0 - params.beta) / family.log_k
    inf_mass = params.eps / family.log_k
    tail_mass = 1.0 - s1_mass - inf_mass
    if not tail_mass > 0:
        raise PreconditionError('V~ leaves no mass for its tail at k=%d'
                                % family.k)
    return s1_mass, tail_mass, inf_mass


def sample_V_tilde(family, size, rng):
    params = family.params
    s1_mass, tail_mass, inf_mass = v_tilde_masses(family)
    scale = s1_mass * (1.0 + params.eps) * params.c_z(family.k) * \
        params.gamma
    tail = family.cut_tail(tail_mass / scale)
    log_sigma = np.log(params.sigma)

    def s1_part(count, gen):
        return -np.logaddexp(-sample_S1(family, count, gen), log_sigma)

    return mixture(size, rng, ((s1_mass, s1_part), (tail_mass, tail.sample),
                               (inf_mass, -np.inf)))


def sample_W0_tilde(family, size, rng):
    """``V~ - Z1~`` with independent parts; ``-inf`` has mass eps/log k"""
    return sample_V_tilde(family, size, rng) - \
        sample_Z1_tilde(family, size, rng)


def s0_bound_gap(family, size, rng):
    """
    One-sided KS check that ``S0`` given ``S0 > 0`` sits below its bounding
    measure given nonzero, the tail cut where
    ``(1 + C_M gamma) gamma I(M, a) = k log k e^{-(gamma + 1 - beta)} - 1``.

    The statistic is ``sup (F_bound - F_S0)``; the bound holds when it stays
    under ``3/sqrt(n)``.
    """
    params = family.params
    target = family.k * family.log_k * \
        np.exp(-(params.gamma + 1.0 - params.beta)) - 1.0
    bound = family.cut_tail(
        target / ((1.0 + params.c_m() * params.gamma) * params.gamma))
    draws = sample_S0(family, size, rng)
    nonzero = np.sort(draws[draws > 0])
    n = len(nonzero)
    if not n:
        return BoundGap(0.0, np.inf, 0, True)
    statistic = float(np.max(bound.cdf(nonzero) - np.arange(n) / float(n)))
    tolerance = 3.0 / np.sqrt(n)
    logger.debug('S0 bound gap %.5f over %d nonzero draws', statistic, n)
    return BoundGap(statistic, tolerance, n, statistic <= tolerance)
