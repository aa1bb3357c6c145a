# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Population dynamics for the belief recursion.

The reduced step works in phi-space: for the root coloured 0 it builds
``Z_m``, the sum of phi-values of the children pointing at colour ``m``,
and returns the new norm ``x_new = max_m e^-Z_m / sum_m e^-Z_m`` together
with the lower bound ``w_lower`` on ``phi(x_new)`` that only looks at
``Z_0`` and the sum over the other colours.  The full step builds whole
simplex vectors and serves as an oracle for small k.
"""
import logging
from collections import namedtuple

import numpy as np

from chroma.core import settings
from chroma.core.errors import PreconditionError
from chroma.core.parallel import chunked_map, concat
from chroma.core.rng import as_generator, child_seed, chunk_bounds, stream
from chroma.dynamics.arrivals import PopulationSource, arrival_cells
from chroma.measures.star import StarMeasure
from chroma.trees.posterior import log_complement, normalize_log, \
    segment_sums

logger = logging.getLogger(__name__)

ReducedSample = namedtuple('ReducedSample', 'x_new phi_new w_lower')

TrajectoryRow = namedtuple(
    'TrajectoryRow', 'generation mean p_one p_frozen gap quantiles')

ScanRow = namedtuple('ScanRow', 'd gap p_frozen mean')


def as_source(pop):
    """Accept a star measure or anything already exposing tilted samplers"""
    if isinstance(pop, StarMeasure):
        return PopulationSource(pop)
    return pop


def summarize_z(z, k):
    """
    ``ReducedSample`` arrays from a ``(n, k)`` array of ``Z`` values whose
    first column holds the root colour.
    """
    z = np.asarray(z, dtype=float)
    n = len(z)
    rows = np.arange(n)
    shifted = -z - (-z).max(axis=1)[:, None]
    shifted[rows, np.argmax(shifted, axis=1)] = -np.inf
    rest = np.exp(shifted).sum(axis=1)
    x_new = 1.0 / (1.0 + rest)

    # phi(x_new) from log(rest), which stays accurate when rest underflows
    log_rest = _log_sum_exp(shifted)
    with np.errstate(invalid='ignore'):
        phi_new = np.log1p((x_new - 1.0) / (k - 1)) + np.log1p(rest) - \
            log_rest
    phi_new = np.where(x_new == 1.0 / k, 0.0, phi_new)

    with np.errstate(invalid='ignore'):
        b = z[:, :1] - z[:, 1:]
    b = np.where(np.isnan(b), -np.inf, b)
    log_inverse = -_log_sum_exp(b)
    small = log_inverse <= 30.0
    b_top = np.where(small, b.max(axis=1), 0.0)
    scale = np.where(small, np.exp(b - b_top[:, None]).sum(axis=1), 1.0)
    inverse = np.exp(-b_top) / scale
    with np.errstate(over='ignore', invalid='ignore'):
        w_lower = np.where(
            small, np.log1p(inverse - 1.0 / (k - 1)),
            log_inverse + np.log1p((k - 2.0) / (k - 1) *
                                   np.exp(-log_inverse)))
    return ReducedSample(x_new, phi_new, np.maximum(w_lower, 0.0))


def _log_sum_exp(values):
    """Row-wise ``log(sum(exp(values)))``, ``-inf`` for all ``-inf`` rows"""
    top = values.max(axis=1)
    safe = np.where(np.isneginf(top), 0.0, top)
    with np.errstate(divide='ignore'):
        out = safe + np.log(np.exp(values - safe[:, None]).sum(axis=1))
    return np.where(np.isneginf(top), -np.inf, out)


def chunk_size(law, k):
    """Roots per vectorized chunk; depends on the request only"""
    per_root = int(max(k, law.mean)) + 1
    return max(1, min(settings.CHUNK_SIZE, settings.ARRIVAL_BUDGET // per_root))


def reduced_batch(source, law, k, size, rng):
    """``size`` reduced steps drawn from one generator"""
    cells, values = arrival_cells(law, k, source, size, rng)
    # bincount returns integers when no arrival is drawn
    z = np.bincount(cells, weights=values, minlength=size * k).astype(float)
    return summarize_z(z.reshape(size, k), k)


def bound_violations(sample):
    """
    Samples with ``phi_new < w_lower`` beyond rounding.  An infinite
    ``w_lower`` is met only by an infinite ``phi_new``.
    """
    finite = np.isfinite(sample.w_lower)
    w_lower = sample.w_lower[finite]
    slack = 1e-9 * np.maximum(1.0, np.abs(w_lower))
    below = int((sample.phi_new[finite] < w_lower - slack).sum())
    return below + int(np.isfinite(sample.phi_new[~finite]).sum())


def _reduced_chunk(task):
    source, law, k, count, seed, key = task
    return tuple(reduced_batch(source, law, k, count, stream(seed, *key)))


def reduced_step(pop, law, k, size, rng, workers=1, key=('reduced',)):
    """
    ``size`` independent reduced steps from ``pop``.

    Chunk ``c`` draws from ``stream(seed, *key, c)`` with ``seed`` taken
    from ``rng``, so the output does not depend on ``workers``.
    """
    if k < 3:
        raise PreconditionError('The reduced step needs k >= 3')
    source = as_source(pop)
    seed = child_seed(as_generator(rng))
    tasks = [(source, law, k, stop - start, seed, key + (index,))
             for index, (start, stop) in
             enumerate(chunk_bounds(size, chunk_size(law, k)))]
    return ReducedSample(*concat(chunked_map(_reduced_chunk, tasks, workers)))


def reduced_step_sample(pop, law, k, rng):
    """One ``(x_new, w_lower)`` pair"""
    sample = reduced_batch(as_source(pop), law, k, 1, rng)
    return float(sample.x_new[0]), float(sample.w_lower[0])


def gamma_full_step(pop, law, k, size, rng, symmetrize=False):
    """
    ``size`` simplex vectors from ``Gamma(Pi_0 pop)``.

    Children get colours uniform on ``1..k-1``; each child carries a star
    vector whose value is drawn from ``pop`` and whose argmax is its own
    colour with probability equal to the value.  With ``symmetrize`` the
    root colour is uniform instead of 0, giving ``Gamma_s``.
    """
    if k > settings.FULL_STEP_MAX_K:
        raise PreconditionError('gamma_full_step is limited to k <= %d'
                                % settings.FULL_STEP_MAX_K)
    degrees = np.asarray(law.sample(rng, size), dtype=np.int64)
    total = int(degrees.sum())
    colour = 1 + rng.integers(k - 1, size=total)
    value = pop.sample(total, rng)
    other = (colour + 1 + rng.integers(k - 1, size=total)) % k
    argmax = np.where(rng.random(total) < value, colour, other)

    vectors = np.repeat(((1.0 - value) / (k - 1))[:, None], k, axis=1)
    vectors[np.arange(total), argmax] = value
    out = normalize_log(segment_sums(log_complement(vectors), degrees))
    if symmetrize:
        shift = rng.integers(k, size=size)
        idx = (np.arange(k)[None, :] - shift[:, None]) % k
        out = np.take_along_axis(out, idx, axis=1)
    return out


def trajectory_row(pop, generation, grid=None):
    """Summary statistics of one generation"""
    grid = grid or settings.SNAPSHOT_GRID
    levels = (np.arange(grid) + 0.5) / grid
    weights = pop.weights / pop.mass
    return TrajectoryRow(
        generation=generation,
        mean=pop.mean(),
        p_one=float(weights[pop.points == 1.0].sum()),
        p_frozen=float(weights[pop.points > 1.0 - 1e-9].sum()),
        gap=reconstruction_gap(pop),
        quantiles=pop.quantile(levels))


def iterate(pop0, law, k, n_steps, size, rng, workers=1, grid=None):
    """
    Resampled population dynamics.

    Each generation draws ``size`` fresh reduced steps from the previous
    generation.  Returns the trajectory rows and the last population.
    """
    if size < 1000:
        raise PreconditionError('Population dynamics needs at least 1000 '
                                'samples, got %d' % size)
    rng = as_generator(rng)
    pop = pop0
    rows = [trajectory_row(pop, 0, grid)]
    for generation in range(1, n_steps + 1):
        sample = reduced_step(pop, law, k, size, rng, workers,
                              key=('population', generation))
        pop = StarMeasure.from_samples(sample.x_new, k=k)
        rows.append(trajectory_row(pop, generation, grid))
        logger.info('Generation %4d mean=%.6f frozen=%.4f', generation,
                    rows[-1].mean, rows[-1].p_frozen)
    return rows, pop


def reconstruction_gap(pop):
    """``E[x] - 1/k``, the expected excess of the largest coordinate"""
    return pop.mean() - 1.0 / pop.k


def reconstruction_scan(k, law_factory, degrees, n_steps, size, rng,
                        workers=1):
    """
    Run :func:`iterate` from the frozen start for every degree.

    :param law_factory: maps a degree to an offspring law
    """
    rng = as_generator(rng)
    rows = []
    for d in degrees:
        trajectory, _ = iterate(StarMeasure.frozen(k), law_factory(d), k,
                                n_steps, size, rng, workers)
        last = trajectory[-1]
        rows.append(ScanRow(d, last.gap, last.p_frozen, last.mean))
        logger.info('Scan d=%g gap=%.6f frozen=%.4f', d, last.gap,
                    last.p_frozen)
    return rows
