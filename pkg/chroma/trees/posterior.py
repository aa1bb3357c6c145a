# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Root posteriors of the colouring broadcast given the leaves at depth n.

The message of a node is ``f(l) ∝ prod_children (1 - f_child(l))``;
observed leaves start as point masses and a node without observed
descendants contributes the uniform vector.
"""
import logging
from collections import namedtuple

import numpy as np

from chroma.core import settings
from chroma.core.errors import InconsistentEvidence, ResourceLimitError

logger = logging.getLogger(__name__)


class StarVector(namedtuple('StarVector', 'value argmax')):
    """Point of Lambda^k: ``value`` at ``argmax``, the rest shared evenly"""

    def vector(self, k):
        """The simplex vector this point stands for"""
        out = np.full(k, (1.0 - self.value) / (k - 1))
        out[self.argmax] = self.value
        return out


def log_complement(vectors):
    """``log(1 - v)`` with exact zeros turned into ``-inf``"""
    with np.errstate(divide='ignore'):
        return np.log1p(-vectors)


def segment_sums(values, counts):
    """
    Row sums of ``values`` over consecutive segments of length ``counts``.

    Empty segments sum to zero.  Works with ``-inf`` entries.
    """
    out = np.zeros((len(counts),) + values.shape[1:])
    busy = counts > 0
    if busy.any():
        starts = np.concatenate(([0], np.cumsum(counts)[:-1]))[busy]
        out[busy] = np.add.reduceat(values, starts, axis=0)
    return out


def normalize_log(acc):
    """Rows of ``exp(acc)`` scaled to sum to one"""
    top = acc.max(axis=1)
    if np.isneginf(top).any():
        raise InconsistentEvidence('Leaf colours admit no proper colouring')
    weights = np.exp(acc - top[:, None])
    return weights / weights.sum(axis=1)[:, None]


def exact_posterior(tree, k, leaf_colours):
    """
    Law of the root colour given the colours of L_n.

    :param leaf_colours: colours of ``tree.leaves()``, in that order
    """
    leaf_colours = np.asarray(leaf_colours, dtype=np.int64)
    leaves = tree.leaves()
    if len(leaf_colours) != len(leaves):
        raise InconsistentEvidence('Expected %d leaf colours, got %d'
                                   % (len(leaves), len(leaf_colours)))

    below = np.eye(k)[leaf_colours]
    for depth in range(tree.depth_cap - 1, -1, -1):
        start, stop = tree.level(depth)
        acc = segment_sums(log_complement(below),
                           tree.child_count[start:stop])
        below = normalize_log(acc)
    return below[0]


def brute_force_posterior(tree, k, leaf_colours, ceiling=None):
    """
    Law of the root colour by enumerating every proper completion.
    """
    ceiling = ceiling or settings.ENUMERATION_CEILING
    leaves = tree.leaves()
    free = np.setdiff1d(np.arange(tree.n_nodes), leaves)
    if len(free) == 0:
        return np.eye(k)[int(leaf_colours[0])]
    if float(k) ** len(free) > ceiling:
        raise ResourceLimitError('%d^%d colourings exceed the ceiling of %d'
                                 % (k, len(free), ceiling))

    grid = np.indices((k,) * len(free)).reshape(len(free), -1).T
    colourings = np.empty((len(grid), tree.n_nodes), dtype=np.int64)
    colourings[:, free] = grid
    colourings[:, leaves] = np.asarray(leaf_colours, dtype=np.int64)
    proper = (colourings[:, 1:] != colourings[:, tree.parent[1:]]).all(axis=1)

    counts = np.bincount(colourings[proper, 0], minlength=k).astype(float)
    if counts.sum() == 0:
        raise InconsistentEvidence('Leaf colours admit no proper colouring')
    return counts / counts.sum()


def tie_break(vectors, uniforms, rtol=None):
    """
    Row-wise argmax, ties resolved by ``uniforms``.

    Entries within relative ``rtol`` of the row maximum tie; ``rtol=0``
    asks for exact equality.
    """
    rtol = settings.TIE_RTOL if rtol is None else rtol
    vectors = np.atleast_2d(vectors)
    top = vectors.max(axis=1)
    ties = vectors >= (top * (1.0 - rtol))[:, None]
    count = ties.sum(axis=1)
    pick = np.minimum((np.asarray(uniforms) * count).astype(np.int64),
                      count - 1)
    rank = np.cumsum(ties, axis=1) - 1
    return np.argmax(ties & (rank == pick[:, None]), axis=1)


def lambda_project(vector, rng, rtol=None):
    """Project a simplex vector onto Lambda^k"""
    vector = np.asarray(vector, dtype=float)
    argmax = tie_break(vector, [rng.random()], rtol)[0]
    return StarVector(float(vector.max()), int(argmax))
