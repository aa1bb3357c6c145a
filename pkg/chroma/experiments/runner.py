# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Run one experiment subcommand and write its report.

Every subcommand draws from ``stream(seed, subcommand, ...)`` and passes
``workers`` only to chunked maps, so reports do not depend on the worker
count.  In check mode the expected outcome of the subcommand is asserted
and :func:`run` returns 1 when it fails.
"""
import logging
from collections import OrderedDict

import numpy as np

from chroma.candidate.dominance import verify_dominance
from chroma.candidate.stable import STABLE_KS_TOL, stable_law_test, \
    sum_tail_profile
from chroma.core.rng import stream
from chroma.dynamics.population import bound_violations, \
    gamma_full_step, iterate, reconstruction_scan, reduced_step
from chroma.experiments import reports
from chroma.measures.empirical import EmpiricalMeasure, ks_distance
from chroma.measures.star import StarMeasure
from chroma.reconstruction.alice import alice_norms, draw_uniforms, \
    equivariance_check, run_alice, truncation_tv_bound
from chroma.reconstruction.fixtures import build_reductions, find_dominated
from chroma.thresholds.freezing import freezing_sweep
from chroma.trees.model import Deterministic, Poisson, TruncatedPoisson, \
    broadcast_colouring, sample_tree
from chroma.trees.posterior import brute_force_posterior, exact_posterior

logger = logging.getLogger(__name__)

# Small trees for the exact-vs-enumeration comparison
ORACLE_LAW = Poisson(1.5)
ORACLE_KS = (3, 4, 5)
ORACLE_MAX_NODES = 8
ORACLE_MAX_DEPTH = 3
ORACLE_TOL = 1e-10

TAIL_ZS = (0.5, 1.0, 2.0, 5.0, 10.0)

EQUIVARIANCE_TOL = 1e-9


def starting_measure(start, k):
    """``trivial``, ``frozen`` or their even ``mixed`` combination"""
    trivial = StarMeasure.trivial(k)
    if start == 'trivial':
        return trivial
    if start == 'frozen':
        return StarMeasure.frozen(k)
    return trivial.mix(StarMeasure.frozen(k), 0.5)


def law_family(law):
    """Map a degree to a law of the same family as ``law``"""
    if isinstance(law, Deterministic):
        return lambda d: Deterministic(int(d))
    return Poisson


def _rng(config, *key):
    return stream(config.seed, config.subcommand, *key)


def run_thresholds(config, out):
    rows = freezing_sweep(config.ks, config.model, config.beta)
    reports.write_sweep(out, config, rows)
    distance = [abs(row.d_f / row.freezing_asymptotic - 1.0) for row in rows]
    ok = all(b <= a for a, b in zip(distance, distance[1:]))
    if not ok:
        logger.error('Freezing ratios do not approach 1: %s', distance)
    return ok


def run_population(config, out):
    k = config.k
    pop0 = starting_measure(config.start, k)
    rows, _ = iterate(pop0, config.offspring(), k, config.gens, config.pop,
                      _rng(config), config.workers)
    reports.write_trajectory(out, config, rows)
    if config.start != 'trivial':
        return True
    ok = all((row.quantiles == 1.0 / k).all() for row in rows)
    if not ok:
        logger.error('The trivial start moved away from 1/k')
    return ok


def run_full_vs_reduced(config, out):
    k, n, law = config.k, config.pop, config.offspring()
    pop = starting_measure(config.start, k)
    full = gamma_full_step(pop, law, k, n, _rng(config, 'full'),
                           symmetrize=True)
    reduced = reduced_step(pop, law, k, n, _rng(config, 'reduced'),
                           config.workers)
    distance = ks_distance(EmpiricalMeasure.from_samples(full.max(axis=1)),
                           EmpiricalMeasure.from_samples(reduced.x_new))
    violations = bound_violations(reduced)
    tolerance = 3.0 / np.sqrt(n)
    report = OrderedDict((
        ('ks', distance),
        ('tolerance', tolerance),
        ('bound_violations', violations),
        ('mean_full', float(full.max(axis=1).mean())),
        ('mean_reduced', float(reduced.x_new.mean())),
    ))
    reports.write_json(out, config, report)
    logger.info('Full vs reduced k=%d KS=%.5f violations=%d', k, distance,
                violations)
    return distance <= tolerance and violations == 0


def _oracle_instance(rng, index):
    k = ORACLE_KS[index % len(ORACLE_KS)]
    while True:
        depth = 1 + int(rng.integers(ORACLE_MAX_DEPTH))
        tree = sample_tree(ORACLE_LAW, depth, rng)
        if 1 < tree.n_nodes <= ORACLE_MAX_NODES and len(tree.leaves()):
            break
    colouring = broadcast_colouring(tree, k, 'uniform', rng)
    leaf_colours = colouring.colours[tree.leaves()]
    exact = exact_posterior(tree, k, leaf_colours)
    brute = brute_force_posterior(tree, k, leaf_colours)
    return k, tree.n_nodes, float(np.abs(exact - brute).max())


def run_bp_oracle(config, out):
    rng = _rng(config)
    rows = [_oracle_instance(rng, i) for i in range(config.instances)]
    deviation = max(row[2] for row in rows)
    report = OrderedDict((
        ('instances', config.instances),
        ('ks', list(ORACLE_KS)),
        ('max_nodes', max(row[1] for row in rows)),
        ('max_deviation', deviation),
        ('tolerance', ORACLE_TOL),
    ))
    reports.write_json(out, config, report)
    logger.info('BP oracle: %d instances, max deviation %.3g',
                config.instances, deviation)
    return deviation <= ORACLE_TOL


def run_stable_law(config, out):
    params = config.params()
    rows = []
    for k in config.ks:
        statistic = stable_law_test(params, k, config.pop, _rng(config, k))
        rows.append(OrderedDict((('k', k), ('ks', statistic))))
    largest = max(config.ks)
    profile = sum_tail_profile(params, largest, config.pop, TAIL_ZS,
                               _rng(config, 'tail'))
    report = OrderedDict((
        ('n', config.pop),
        ('rows', rows),
        ('tail_profile', profile),
        ('tolerance', STABLE_KS_TOL),
    ))
    reports.write_json(out, config, report)
    at_largest = [row['ks'] for row in rows if row['k'] == largest]
    return at_largest[0] <= STABLE_KS_TOL


def run_verify_dominance(config, out):
    report = verify_dominance(config.params(), config.k, config.n_dom,
                              _rng(config), config.c, config.workers)
    reports.write_json(out, config, report)
    # exploratory: the outcome is recorded, never asserted
    return True


def alice_laws(config):
    """``(tree law, law the fixture is built for, truncation law)``"""
    law = config.offspring()
    if config.mode == 'truncated':
        truncation = TruncatedPoisson(config.d_prime, law.d)
        return law, truncation, truncation
    return law, law, None


def _equivariance(config, law, truncation, reductions):
    rng = _rng(config, 'equivariance')
    worst = 0.0
    for _ in range(config.trials):
        tree = sample_tree(law, config.depth, rng)
        colouring = broadcast_colouring(tree, config.k, 'uniform', rng)
        uniforms = draw_uniforms(tree.n_nodes, config.k, rng)
        d_array = truncation.sample(rng, tree.n_nodes) \
            if truncation is not None else None
        record, _ = run_alice(tree, colouring, config.k, reductions.q0,
                              reductions.qstar, uniforms, config.mode,
                              reductions.qt, d_array)
        worst = max(worst, equivariance_check(record, config.k, 10, rng))
    return worst


def run_alice_bob(config, out):
    k = config.k
    law, fixture_law, truncation = alice_laws(config)
    mu_k = find_dominated(k, fixture_law.mean, config.theta, config.n_iter,
                          config.n_dom, _rng(config, 'fixture'),
                          law=fixture_law)
    reductions = build_reductions(mu_k, law, k, config.n_dom,
                                  _rng(config, 'reductions'), truncation)
    tolerance = 4.0 / np.sqrt(config.runs)
    rows = []
    for depth in range(1, config.depth + 1):
        norms = alice_norms(law, k, depth, reductions, config.runs,
                            _rng(config, 'runs', depth), config.workers,
                            config.mode, truncation)
        distance = ks_distance(EmpiricalMeasure.from_samples(norms), mu_k)
        rows.append(OrderedDict((('depth', depth), ('ks', distance))))
        logger.info('Alice depth %d KS=%.5f', depth, distance)
    worst = _equivariance(config, law, truncation, reductions)
    report = OrderedDict((
        ('fixture_gap', mu_k.gap()),
        ('rows', rows),
        ('tolerance', tolerance),
        ('equivariance_max_deviation', worst),
        ('equivariance_tolerance', EQUIVARIANCE_TOL),
    ))
    if truncation is not None:
        report['truncation_tv'] = truncation_tv_bound(config.d_prime, law.d,
                                                      k)
    reports.write_json(out, config, report)
    return all(row['ks'] <= tolerance for row in rows) and \
        worst <= EQUIVARIANCE_TOL


def run_scan(config, out):
    rows = reconstruction_scan(config.k, law_family(config.offspring()),
                               config.degrees, config.gens, config.pop,
                               _rng(config), config.workers)
    reports.write_scan(out, config, rows)
    return True


HANDLERS = OrderedDict((
    ('thresholds', run_thresholds),
    ('population', run_population),
    ('full-vs-reduced', run_full_vs_reduced),
    ('bp-oracle', run_bp_oracle),
    ('stable-law', run_stable_law),
    ('verify-dominance', run_verify_dominance),
    ('alice-bob', run_alice_bob),
    ('scan', run_scan),
))


def run(config, out=None):
    """
    Run ``config.subcommand`` and write its report to ``out``, or to
    ``config.out`` when no stream is given.

    :returns: exit status, 1 only for a failed check in check mode
    """
    handler = HANDLERS[config.subcommand]
    logger.info('Running %s seed=%d workers=%d', config.subcommand,
                config.seed, config.workers)
    if out is None:
        with reports.open_output(config.out) as stream_out:
            ok = handler(config, stream_out)
    else:
        ok = handler(config, out)
    if config.check and not ok:
        logger.error('Check failed for %s', config.subcommand)
        return 1
    return 0
