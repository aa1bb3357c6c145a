# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Numerical check that the law of ``W`` dominates the candidate by
``c / log k``.
"""
import logging
from collections import OrderedDict, namedtuple

import numpy as np

from chroma.candidate.family import build_candidate
from chroma.candidate.stable import t_k_threshold
from chroma.core import settings
from chroma.core.errors import PreconditionError
from chroma.dynamics.population import reduced_step
from chroma.measures.empirical import EmpiricalMeasure, cdf_gap, \
    dominates, dominates_by_eps
from chroma.trees.model import Poisson

logger = logging.getLogger(__name__)

DominanceReport = namedtuple(
    'DominanceReport',
    'k n_samples eps holds dominates worst_gap max_c grid gap diagnostics')


def _profile_indices(length, keep, size):
    if length <= size:
        return np.arange(length)
    picked = np.linspace(0, length - 1, size).astype(np.int64)
    return np.union1d(picked, keep)


def dominance_report(reference, law_w, eps, k, n_samples=None,
                     diagnostics=None):
    """
    Compare ``law_w`` with ``reference`` on the merged support.

    ``worst_gap`` is the smallest ``F_ref - F_W`` over points where neither
    escape clause applies (``F_ref < 1`` and ``F_W > 0``); ``max_c`` is
    ``log k`` times it, 0 when negative.  When no point constrains, plain
    dominance holds for every c and ``max_c`` is inf.
    """
    grid, gap = cdf_gap(reference, law_w)
    f_ref = reference.cdf(grid) / reference.mass
    f_w = law_w.cdf(grid) / law_w.mass
    active = (f_ref < 1.0 - settings.CDF_TOL) & (f_w > settings.CDF_TOL)
    if active.any():
        worst_at = int(np.flatnonzero(active)[np.argmin(gap[active])])
        worst_gap = float(gap[worst_at])
        max_c = max(worst_gap, 0.0) * np.log(k)
    else:
        worst_at, worst_gap, max_c = 0, np.inf, np.inf
    keep = _profile_indices(len(grid), [worst_at], settings.SNAPSHOT_GRID)
    return DominanceReport(
        k=int(k),
        n_samples=n_samples if n_samples is not None else len(law_w),
        eps=float(eps),
        holds=dominates_by_eps(reference, law_w, eps),
        dominates=dominates(reference, law_w),
        worst_gap=worst_gap,
        max_c=float(max_c),
        grid=grid[keep],
        gap=gap[keep],
        diagnostics=diagnostics or OrderedDict())


def family_diagnostics(family):
    """Derived constants reported next to every dominance run"""
    params = family.params
    k = family.k
    return OrderedDict((
        ('alpha', family.alpha),
        ('a_k', family.a_k),
        ('p_r_neq', family.p_r_neq),
        ('p_k_neq', family.p_k_neq),
        ('C_M', params.c_m()),
        ('C_Z', float(params.c_z(k))),
        ('t_k', t_k_threshold(params, k)),
        ('D', float(params.big_d(k))),
        ('d', float(params.degree(k))),
    ))


def verify_dominance(params, k, n, rng, c=0.1, workers=1, source=None,
                     reference=None):
    """
    Draw ``n`` samples of ``W`` with arrivals from ``nu_k`` at degree
    ``(k - 1) D`` and report whether their law dominates ``nu_k`` by
    ``c / log k``.

    ``source`` and ``reference`` replace the arrival law and the measure
    compared against; they go together.
    """
    if (source is None) != (reference is None):
        raise PreconditionError('source and reference must be given '
                                'together')
    diagnostics = OrderedDict()
    if source is None:
        family = build_candidate(params, k)
        source, reference = family.source(), family
        diagnostics = family_diagnostics(family)
    law = Poisson(params.degree(k))
    logger.info('Dominance run k=%d d=%.6g n=%d workers=%d', k, law.d, n,
                workers)
    sample = reduced_step(source, law, k, n, rng, workers,
                          key=('dominance',))
    law_w = EmpiricalMeasure.from_samples(sample.w_lower)
    diagnostics['mean_W'] = law_w.mean()
    diagnostics['p_W_zero'] = float(np.mean(sample.w_lower == 0.0))
    report = dominance_report(reference, law_w, c / np.log(k), k, n,
                              diagnostics)
    logger.info('Dominance k=%d holds=%s worst_gap=%.6g max_c=%.6g', k,
                report.holds, report.worst_gap, report.max_c)
    return report
