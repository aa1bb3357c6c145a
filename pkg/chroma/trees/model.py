# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Galton-Watson trees and the colour broadcast process.

Trees are stored breadth first in flat arrays: every level is a contiguous
index range and the children of a node are contiguous inside the next
level.  Colours are integers ``0..k-1``.
"""
import logging
from collections import namedtuple

import numpy as np
from scipy import stats

from chroma.core import settings
from chroma.core.errors import PreconditionError, ResourceLimitError

logger = logging.getLogger(__name__)


class OffspringLaw(object):
    """Base of the offspring laws; subclasses implement ``sample``"""
    name = None

    def sample(self, rng, size=None):
        """Draw offspring counts"""
        raise NotImplementedError

    def pmf(self, count):
        """Probability of ``count`` children"""
        raise NotImplementedError

    @property
    def mean(self):
        """Expected number of children"""
        raise NotImplementedError

    @property
    def cap(self):
        """Largest possible count, None when unbounded"""
        return None

    def spec(self):
        """Textual form accepted by :func:`parse_law`"""
        raise NotImplementedError

    def __repr__(self):
        return '<%s %s>' % (self.__class__.__name__, self.spec())

    def __eq__(self, other):
        return type(self) is type(other) and self.spec() == other.spec()

    def __hash__(self):
        return hash(self.spec())


class Poisson(OffspringLaw):
    """Poisson(d) offspring"""
    name = 'poisson'

    def __init__(self, d):
        if not d > 0:
            raise PreconditionError('Poisson mean must be positive, got %r'
                                    % (d,))
        self.d = float(d)

    def sample(self, rng, size=None):
        return rng.poisson(self.d, size=size)

    def pmf(self, count):
        return stats.poisson.pmf(count, self.d)

    @property
    def mean(self):
        return self.d

    def spec(self):
        return 'poisson:%r' % self.d


class Deterministic(OffspringLaw):
    """Every internal node has exactly d children"""
    name = 'dary'

    def __init__(self, d):
        if int(d) != d or d < 1:
            raise PreconditionError('Arity must be a positive integer, got %r'
                                    % (d,))
        self.d = int(d)

    def sample(self, rng, size=None):
        if size is None:
            return self.d
        return np.full(size, self.d, dtype=np.int64)

    def pmf(self, count):
        return np.where(np.asarray(count) == self.d, 1.0, 0.0)

    @property
    def mean(self):
        return float(self.d)

    @property
    def cap(self):
        return self.d

    def spec(self):
        return 'dary:%d' % self.d


class TruncatedPoisson(OffspringLaw):
    """
    Law of ``D' * 1{D' <= d}`` with ``D' ~ Poisson(d')``.

    Mass above the cap moves to 0 children, not to the cap.
    """
    name = 'tpois'

    def __init__(self, d_prime, cap):
        if not d_prime > 0:
            raise PreconditionError('Truncated Poisson mean must be positive,'
                                    ' got %r' % (d_prime,))
        if int(cap) != cap or cap < 0:
            raise PreconditionError('Cap must be a nonnegative integer, '
                                    'got %r' % (cap,))
        self.d_prime = float(d_prime)
        self.d = int(cap)

    def sample(self, rng, size=None):
        draws = rng.poisson(self.d_prime, size=size)
        return draws * (draws <= self.d)

    def pmf(self, count):
        count = np.asarray(count)
        base = stats.poisson.pmf(count, self.d_prime)
        overflow = stats.poisson.sf(self.d, self.d_prime)
        return np.where(count > self.d, 0.0,
                        np.where(count == 0, base + overflow, base))

    @property
    def mean(self):
        counts = np.arange(self.d + 1)
        return float((counts * stats.poisson.pmf(counts, self.d_prime)).sum())

    @property
    def cap(self):
        return self.d

    def spec(self):
        return 'tpois:%r,%d' % (self.d_prime, self.d)


def parse_law(text):
    """
    Parse ``poisson:d``, ``dary:d`` or ``tpois:d',d``.

    >>> parse_law('dary:3')
    <Deterministic dary:3>
    """
    try:
        name, args = text.strip().split(':', 1)
        values = [float(i) for i in args.split(',')]
    except ValueError:
        raise PreconditionError('Malformed offspring law "%s"' % text)
    name = name.strip().lower()
    if name == 'poisson' and len(values) == 1:
        return Poisson(values[0])
    if name == 'dary' and len(values) == 1:
        return Deterministic(values[0])
    if name == 'tpois' and len(values) == 2:
        return TruncatedPoisson(values[0], values[1])
    raise PreconditionError('Unknown offspring law "%s"' % text)


def sample_offspring(law, rng):
    """One offspring count"""
    return int(law.sample(rng))


def _level_bounds(child_count):
    """Start offsets of consecutive levels, closed by the node count"""
    bounds = [0, 1]
    while bounds[-1] < len(child_count):
        start, stop = bounds[-2], bounds[-1]
        bounds.append(stop + int(child_count[start:stop].sum()))
        if bounds[-1] == stop:
            raise PreconditionError('Nodes unreachable from the root')
    return bounds


class TreeSample(object):
    """
    A rooted tree in breadth first order.

    :param parent: parent index per node, -1 at the root
    :param child_count: number of children per node
    :param depth_cap: the depth n of the observed level L_n
    """

    def __init__(self, parent, child_count, depth_cap):
        self.parent = np.asarray(parent, dtype=np.int64)
        self.child_count = np.asarray(child_count, dtype=np.int64)
        self.depth_cap = int(depth_cap)
        n = len(self.parent)
        if n == 0 or self.parent[0] != -1 or (self.parent[1:] < 0).any():
            raise PreconditionError('Tree must have a single root at index 0')
        if (np.diff(self.parent[1:]) < 0).any() or \
                (self.parent[1:] >= np.arange(1, n)).any():
            raise PreconditionError('Nodes must be in breadth first order')
        if self.child_count.sum() != n - 1:
            raise PreconditionError('Child counts do not match parents')

        self.child_start = np.concatenate(
            ([1], 1 + np.cumsum(self.child_count)[:-1])).astype(np.int64)
        bounds = _level_bounds(self.child_count)
        if len(bounds) - 2 > self.depth_cap:
            raise PreconditionError('Node deeper than depth cap %d'
                                    % self.depth_cap)
        self.depth = np.repeat(np.arange(len(bounds) - 1), np.diff(bounds))
        self.level_offsets = np.searchsorted(
            self.depth, np.arange(self.depth_cap + 2), side='left')

    @classmethod
    def from_parents(cls, parent, depth_cap=None):
        """Build from a breadth first parent list"""
        parent = np.asarray(parent, dtype=np.int64)
        count = np.bincount(parent[1:], minlength=len(parent))
        if depth_cap is None:
            depth_cap = len(_level_bounds(count)) - 2
        return cls(parent, count, depth_cap)

    def __len__(self):
        return len(self.parent)

    @property
    def n_nodes(self):
        """Number of nodes"""
        return len(self.parent)

    def level(self, depth):
        """Index range ``(start, stop)`` of the nodes at ``depth``"""
        return int(self.level_offsets[depth]), \
            int(self.level_offsets[depth + 1])

    def leaves(self):
        """Indices of L_n, the nodes at depth ``depth_cap``"""
        start, stop = self.level(self.depth_cap)
        return np.arange(start, stop)

    def children(self, node):
        """Index range of the children of ``node``"""
        start = int(self.child_start[node])
        return range(start, start + int(self.child_count[node]))

    def preorder(self):
        """Node indices in depth first preorder"""
        order = []
        stack = [0]
        while stack:
            node = stack.pop()
            order.append(node)
            stack.extend(reversed(self.children(node)))
        return np.asarray(order, dtype=np.int64)


def sample_tree(law, depth_cap, rng, ceiling=None):
    """
    Sample the first ``depth_cap`` levels of a Galton-Watson tree.

    Branches may die out before ``depth_cap``.
    """
    if depth_cap < 0:
        raise PreconditionError('depth_cap must be nonnegative')
    ceiling = ceiling or settings.NODE_CEILING

    counts = []
    size = 1
    total = 1
    for _ in range(depth_cap):
        level_counts = np.asarray(law.sample(rng, size), dtype=np.int64)
        counts.append(level_counts)
        size = int(level_counts.sum())
        total += size
        if total > ceiling:
            raise ResourceLimitError('Tree exceeds node ceiling of %d'
                                     % ceiling)
        if size == 0:
            break
    counts.append(np.zeros(size, dtype=np.int64))
    child_count = np.concatenate(counts)

    parent = np.concatenate(
        ([-1], np.repeat(np.arange(total - size), child_count[:total - size])))
    return TreeSample(parent, child_count, depth_cap)


class Colouring(namedtuple('Colouring', 'colours k')):
    """Per-node colours in ``0..k-1``"""

    def is_proper(self, tree):
        """True when no child shares its parent's colour"""
        return bool((self.colours[1:] != self.colours[tree.parent[1:]]).all())


def broadcast_colouring(tree, k, root_colour, rng):
    """
    Run the broadcast channel down ``tree``.

    :param root_colour: a colour, or ``'uniform'``
    """
    if k < 2:
        raise PreconditionError('Need at least two colours, got %r' % (k,))
    colours = np.empty(tree.n_nodes, dtype=np.int64)
    if root_colour == 'uniform':
        colours[0] = rng.integers(k)
    elif 0 <= int(root_colour) < k:
        colours[0] = int(root_colour)
    else:
        raise PreconditionError('Root colour %r outside 0..%d'
                                % (root_colour, k - 1))

    for depth in range(1, tree.depth_cap + 1):
        start, stop = tree.level(depth)
        if start == stop:
            break
        shift = 1 + rng.integers(k - 1, size=stop - start)
        colours[start:stop] = (colours[tree.parent[start:stop]] + shift) % k
    return Colouring(colours, k)


def dump_tree(tree, colours=None):
    """Lines of ``index parent depth colour``; colour -1 when unknown"""
    if colours is None:
        colours = np.full(tree.n_nodes, -1, dtype=np.int64)
    lines = ['%d %d %d %d' % row for row in
             zip(range(tree.n_nodes), tree.parent, tree.depth, colours)]
    return '\n'.join(lines) + '\n'


def load_tree(content, depth_cap=None):
    """Inverse of :func:`dump_tree`, returns ``(tree, colours)``"""
    if not content.strip():
        raise ValueError('Content must be not empty')
    rows = []
    for line in content.splitlines():
        if not line.strip():
            continue
        try:
            rows.append([int(i) for i in line.split()])
        except ValueError:
            raise ValueError("Can't parse tree line: %s" % line)
    rows = np.asarray(rows, dtype=np.int64)
    if rows.shape[1] != 4 or (rows[:, 0] != np.arange(len(rows))).any():
        raise ValueError('Tree lines must be "index parent depth colour" '
                         'in index order')
    if depth_cap is None:
        depth_cap = int(rows[:, 2].max())
    return TreeSample.from_parents(rows[:, 1], depth_cap), rows[:, 3]
