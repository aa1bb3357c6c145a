# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Colour permutations used by Alice, in array form: ``perm[i]`` is the
image of colour ``i``.  Batched constructors take one row of uniform keys
per permutation so that the randomness comes from pre-drawn arrays.
"""
import numpy as np

from chroma.core.errors import PreconditionError


def compose(first, second):
    """``first o second``: colour ``i`` goes to ``first[second[i]]``"""
    return np.take_along_axis(np.atleast_2d(first), np.atleast_2d(second),
                              axis=-1).reshape(np.shape(second))


def invert(perm):
    """Inverse permutation"""
    return np.argsort(perm, axis=-1)


def is_permutation(perm):
    perm = np.atleast_2d(perm)
    return bool((np.sort(perm, axis=1) == np.arange(perm.shape[1])).all())


def nu1_permutations(fixed, keys):
    """
    Uniform permutations fixing ``fixed[i]``, one per row of ``keys``.

    The key of the fixed colour is pushed below all others; the remaining
    colours, in increasing order, are sent to the others sorted by key.
    """
    keys = np.array(keys, dtype=float, ndmin=2)
    fixed = np.asarray(fixed, dtype=np.int64).reshape(-1)
    n, k = keys.shape
    rows = np.arange(n)
    keys[rows, fixed] = -1.0
    order = np.argsort(keys, axis=1, kind='stable')
    perm = np.empty((n, k), dtype=np.int64)
    perm[rows, fixed] = fixed
    others = np.ones((n, k), dtype=bool)
    others[rows, fixed] = False
    perm[others] = order[:, 1:].ravel()
    return perm


def nu2_permutations(p, coins, keys):
    """
    Uniform permutations where ``coins < p``, identities elsewhere.
    """
    keys = np.array(keys, dtype=float, ndmin=2)
    n, k = keys.shape
    uniform = np.argsort(keys, axis=1, kind='stable')
    identity = np.broadcast_to(np.arange(k), (n, k))
    flip = (np.asarray(coins).reshape(-1) < np.asarray(p).reshape(-1))
    return np.where(flip[:, None], uniform, identity)


def sample_nu1(fixed, k, rng):
    """One permutation uniform among those fixing ``fixed``"""
    if not 0 <= fixed < k:
        raise PreconditionError('Colour %r outside 0..%d' % (fixed, k - 1))
    return nu1_permutations([fixed], rng.random((1, k)))[0]


def sample_nu2(p, k, rng):
    """Uniform with probability ``p``, the identity otherwise"""
    if not 0 <= p <= 1:
        raise PreconditionError('p must lie in [0, 1], got %r' % (p,))
    return nu2_permutations([p], [rng.random()], rng.random((1, k)))[0]


def nu1_mix(vector, fixed):
    """
    Average of ``vector`` over nu1(fixed): coordinate ``fixed`` is kept and
    the rest is spread evenly.
    """
    vector = np.asarray(vector, dtype=float)
    k = vector.shape[-1]
    out = np.full(k, (1.0 - vector[fixed]) / (k - 1))
    out[fixed] = vector[fixed]
    return out


def nu2_mix(vector, p):
    """``(1 - p) vector + p uniform``"""
    if not 0 <= p <= 1:
        raise PreconditionError('p must lie in [0, 1], got %r' % (p,))
    vector = np.asarray(vector, dtype=float)
    return (1.0 - p) * vector + p / vector.shape[-1]
