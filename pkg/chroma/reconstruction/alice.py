# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Manipulated reconstruction.

Alice sees the whole colouring and walks the tree bottom-up.  At a node
``v`` she combines the children into ``P0_v``, projects it onto
Lambda^k around ``l_v`` (the observed colour at a leaf), draws
``p_v = tq(q, |P0_v|, U2)`` and relabels the subtree with
``pi_v = pi2 o pi1``: ``pi1`` is uniform among permutations fixing
``l_v``, ``pi2`` is uniform with probability ``p_v`` and the identity
otherwise.  Bob only gets ``p_w`` and ``eta_w``, the relabelled guess of
every node ``w`` expressed in the root frame, and rebuilds the root
belief ``P_root`` from them alone.

Children beliefs are star vectors mixed with the uniform vector.  All
normalizations sum sorted weights so that a relabelled input gives the
same numbers bit for bit.
"""
import json
import logging
from collections import namedtuple

import numpy as np
from scipy import stats

from chroma.core.errors import InconsistentEvidence, PreconditionError
from chroma.core.parallel import chunked_map, concat
from chroma.core.rng import as_generator, child_seed, chunk_bounds, stream
from chroma.measures.star import tq
from chroma.reconstruction.permutations import compose, invert, \
    nu1_permutations, nu2_permutations
from chroma.trees.model import Deterministic, TreeSample, \
    broadcast_colouring, sample_tree
from chroma.trees.posterior import log_complement, segment_sums, tie_break

logger = logging.getLogger(__name__)

AliceUniforms = namedtuple('AliceUniforms', 'tie mix keys coins')

# Runs per parallel task
RUNS_PER_CHUNK = 256


def draw_uniforms(n_nodes, k, rng):
    """
    Per-node uniforms from three split streams: tie-breaking, mixing
    weight, and the keys and coin behind the permutations.
    """
    seed = child_seed(as_generator(rng))
    third = stream(seed, 'permutation')
    return AliceUniforms(
        tie=stream(seed, 'tie').random(n_nodes),
        mix=stream(seed, 'mix').random(n_nodes),
        keys=third.random((n_nodes, 2 * k)),
        coins=third.random(n_nodes))


class ManipulationRecord(object):
    """
    Alice's actions and Bob's arrays, indexed like the tree.

    ``eta_self[v]`` is ``pi_v(l_v)``; ``eta[v]`` is the same guess carried
    to the root frame through every ancestor's permutation.  ``kept`` is
    False on erased nodes of a truncated run.
    """

    def __init__(self, tree, k, p, l, perm, x0, eta_self, eta, kept):
        self.tree = tree
        self.k = k
        self.p = p
        self.l = l
        self.perm = perm
        self.x0 = x0
        self.eta_self = eta_self
        self.eta = eta
        self.kept = kept

    def __repr__(self):
        return '<ManipulationRecord %d nodes k=%d>' % (self.tree.n_nodes,
                                                       self.k)

    def bob_view(self):
        """``(p, eta)`` with erased entries set to NaN and -1"""
        return (np.where(self.kept, self.p, np.nan),
                np.where(self.kept, self.eta, -1))


def node_beliefs(x0, p, eta, k):
    """Rows ``(1 - p) star(x0 at eta) + p/k``"""
    x0 = np.asarray(x0, dtype=float)
    p = np.asarray(p, dtype=float)
    out = np.repeat(((1.0 - x0) / (k - 1))[:, None], k, axis=1)
    out[np.arange(len(x0)), np.asarray(eta)] = x0
    return (1.0 - p)[:, None] * out + (p / k)[:, None]


def combine(child_beliefs, counts, live):
    """
    ``(P0, |P0|)`` per parent from the beliefs of its children; children
    with ``live`` False are ignored.
    """
    with np.errstate(invalid='ignore'):
        logs = log_complement(child_beliefs)
    logs[~live] = 0.0
    acc = segment_sums(logs, counts)
    top = acc.max(axis=1)
    if np.isneginf(top).any():
        raise InconsistentEvidence('Children beliefs exclude every colour')
    weights = np.exp(acc - top[:, None])
    total = np.sort(weights, axis=1).sum(axis=1)
    return weights / total[:, None], 1.0 / total


def _kept_nodes(tree, d_array):
    kept = np.ones(tree.n_nodes, dtype=bool)
    if d_array is None:
        return kept
    d_array = np.asarray(d_array, dtype=np.int64)
    for depth in range(1, tree.depth_cap + 1):
        start, stop = tree.level(depth)
        nodes = np.arange(start, stop)
        parents = tree.parent[nodes]
        rank = nodes - tree.child_start[parents]
        kept[nodes] = kept[parents] & (rank < d_array[parents])
    return kept


def run_alice(tree, colouring, k, q0, qstar, uniforms, mode='poisson',
              qt=None, d_array=None):
    """
    Alice's bottom-up pass.

    :param colouring: colours per node; only the leaves at depth n are read
    :param q0: reduction of the point mass at 1 onto ``mu_k``, for leaves
    :param qstar: reduction of the one-step image onto ``mu_k``
    :param mode: ``'poisson'``, or ``'truncated'`` to use only the first
        ``d_array[v]`` children of each node and ``qt`` in place of
        ``qstar``
    :returns: ``(record, P_root)``
    """
    if mode not in ('poisson', 'truncated'):
        raise PreconditionError('Unknown mode %r' % (mode,))
    if mode == 'truncated':
        if qt is None or d_array is None:
            raise PreconditionError('Truncated mode needs qt and d_array')
        reduce_inner = qt
    else:
        reduce_inner, d_array = qstar, None

    colours = np.asarray(getattr(colouring, 'colours', colouring))
    n = tree.n_nodes
    kept = _kept_nodes(tree, d_array)
    x0 = np.empty(n)
    p = np.empty(n)
    l = np.empty(n, dtype=np.int64)
    eta_self = np.empty(n, dtype=np.int64)
    perm = np.empty((n, k), dtype=np.int64)

    for depth in range(tree.depth_cap, -1, -1):
        start, stop = tree.level(depth)
        if start == stop:
            continue
        here = slice(start, stop)
        if depth == tree.depth_cap:
            x0[here] = 1.0
            l[here] = colours[here]
            p[here] = tq(q0, x0[here], uniforms.mix[here], k)
        else:
            below = slice(*tree.level(depth + 1))
            beliefs = node_beliefs(x0[below], p[below], eta_self[below], k)
            vectors, x0[here] = combine(beliefs, tree.child_count[here],
                                        kept[below])
            l[here] = tie_break(vectors, uniforms.tie[here])
            p[here] = tq(reduce_inner, x0[here], uniforms.mix[here], k)
        keys = uniforms.keys[here]
        first = nu1_permutations(l[here], keys[:, :k])
        second = nu2_permutations(p[here], uniforms.coins[here], keys[:, k:])
        perm[here] = compose(second, first)
        eta_self[here] = second[np.arange(stop - start), l[here]]

    eta = _to_root_frame(tree, perm, eta_self)
    record = ManipulationRecord(tree, k, p, l, perm, x0, eta_self, eta, kept)
    root = node_beliefs(x0[:1], p[:1], eta[:1], k)[0]
    return record, root


def _to_root_frame(tree, perm, eta_self):
    # path[v] = pi_root o ... o pi_v, folded one level at a time
    path = np.empty_like(perm)
    eta = np.empty_like(eta_self)
    path[0] = perm[0]
    eta[0] = eta_self[0]
    for depth in range(1, tree.depth_cap + 1):
        start, stop = tree.level(depth)
        if start == stop:
            break
        parents = tree.parent[start:stop]
        eta[start:stop] = path[parents, eta_self[start:stop]]
        path[start:stop] = compose(path[parents], perm[start:stop])
    return eta


def bob_belief(tree, k, p, eta, full=False):
    """
    Bob's root belief from ``(p, eta)`` alone; erased nodes carry
    ``eta = -1``.  With ``full`` also returns every ``|P0_v|``.
    """
    p = np.asarray(p, dtype=float)
    eta = np.asarray(eta, dtype=np.int64)
    live = eta >= 0
    x0 = np.empty(tree.n_nodes)
    for depth in range(tree.depth_cap, -1, -1):
        start, stop = tree.level(depth)
        if start == stop:
            continue
        if depth == tree.depth_cap:
            x0[start:stop] = 1.0
            continue
        below = slice(*tree.level(depth + 1))
        with np.errstate(invalid='ignore'):
            beliefs = node_beliefs(x0[below], p[below],
                                   np.where(live[below], eta[below], 0), k)
        _, x0[start:stop] = combine(beliefs, tree.child_count[start:stop],
                                    live[below])
    root = node_beliefs(x0[:1], p[:1], eta[:1], k)[0]
    return (root, x0) if full else root


def relabel(eta, perm):
    """``pi o B``: every non-erased guess mapped through ``perm``"""
    eta = np.asarray(eta)
    return np.where(eta >= 0, np.asarray(perm)[np.maximum(eta, 0)], -1)


def equivariance_check(record, k, trials, rng, perms=None):
    """
    Largest ``|P(pi o B) - pi^-1 o P(B)|`` over ``trials`` random
    permutations, or over ``perms`` when given.
    """
    rng = as_generator(rng)
    p, eta = record.bob_view()
    base = bob_belief(record.tree, k, p, eta)
    if perms is None:
        perms = [rng.permutation(k) for _ in range(trials)]
    worst = 0.0
    for perm in perms:
        moved = bob_belief(record.tree, k, p, relabel(eta, perm))
        worst = max(worst, float(np.abs(moved - base[invert(perm)]).max()))
    return worst


def dump_record(record):
    """
    JSON form of Bob's arrays, nodes in preorder as ``[p, eta]`` pairs,
    ``null`` for erased nodes.
    """
    p, eta = record.bob_view()
    nodes = [[None, None] if eta[i] < 0 else [float(p[i]), int(eta[i])]
             for i in record.tree.preorder()]
    return json.dumps({'k': int(record.k),
                       'depth_cap': record.tree.depth_cap,
                       'parent': [int(i) for i in record.tree.parent],
                       'nodes': nodes}, sort_keys=True, indent=2)


def load_record(content):
    """Inverse of :func:`dump_record`: ``(tree, k, p, eta)``"""
    if not content.strip():
        raise ValueError('Content must be not empty')
    data = json.loads(content)
    tree = TreeSample.from_parents(data['parent'], data['depth_cap'])
    order = tree.preorder()
    if len(order) != len(data['nodes']):
        raise ValueError('Record has %d nodes for a tree of %d'
                         % (len(data['nodes']), len(order)))
    p = np.full(tree.n_nodes, np.nan)
    eta = np.full(tree.n_nodes, -1, dtype=np.int64)
    for node, (value, guess) in zip(order, data['nodes']):
        if guess is not None:
            p[node], eta[node] = value, guess
    return tree, int(data['k']), p, eta


def truncation_tv_bound(d_prime, d, k, c=1.0):
    """
    ``(P(Pois(d') > d), c / (k log k))``: the chance that truncation
    changes a node, and the comparator it should stay under.
    """
    if d_prime > d:
        raise PreconditionError("Need d' <= d, got d'=%r d=%r"
                                % (d_prime, d))
    lhs = float(stats.poisson.sf(d, d_prime)) if d_prime > 0 else 0.0
    return lhs, c / (k * np.log(k))


def _alice_chunk(task):
    law, k, depth, reductions, mode, truncation, count, seed, key = task
    rng = stream(seed, *key)
    norms = np.empty(count)
    for run in range(count):
        tree = sample_tree(law, depth, rng)
        colouring = broadcast_colouring(tree, k, 'uniform', rng)
        uniforms = draw_uniforms(tree.n_nodes, k, rng)
        d_array = truncation.sample(rng, tree.n_nodes) \
            if mode == 'truncated' else None
        _, root = run_alice(tree, colouring, k, reductions.q0,
                            reductions.qstar, uniforms, mode,
                            reductions.qt, d_array)
        norms[run] = root.max()
    return norms


def alice_norms(law, k, depth, reductions, n_runs, rng, workers=1,
                mode='poisson', truncation=None):
    """
    ``|P_root|`` over ``n_runs`` independent trees.

    In truncated mode ``law`` should be :class:`Deterministic` and
    ``truncation`` the law of the used children.
    """
    if mode == 'truncated' and not isinstance(law, Deterministic):
        logger.warning('Truncated mode on a %r tree', law)
    seed = child_seed(as_generator(rng))
    tasks = [(law, k, depth, reductions, mode, truncation, stop - start,
              seed, ('alice', index))
             for index, (start, stop) in
             enumerate(chunk_bounds(n_runs, RUNS_PER_CHUNK))]
    return concat(chunked_map(_alice_chunk, tasks, workers))
