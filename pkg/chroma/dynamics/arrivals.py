# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Tilted laws and offspring arrivals of the reduced recursion.

With the root coloured 0, a child of colour ``l`` brings a star vector
whose argmax equals ``l`` with probability equal to its value.  Such a
child adds ``phi(Y=)`` to ``Z_l`` where ``Y=`` follows the x-tilted law;
otherwise it adds ``phi(Y!=)`` to one of the other colours, drawn from
the (1-x)-tilted law.  Arrivals with phi equal to 0 change nothing and
are thinned away before sampling.
"""
import logging
from collections import namedtuple

import numpy as np

from chroma.core.errors import PreconditionError
from chroma.measures.empirical import EmpiricalMeasure
from chroma.trees.model import Poisson

logger = logging.getLogger(__name__)

ArrivalCounts = namedtuple('ArrivalCounts', 'eq neq')


def tilt_split(pop):
    """
    ``(mu_eq, mu_neq, p_neq)`` for a star measure ``pop``.

    ``mu_eq`` is proportional to ``x pop(dx)`` and ``mu_neq`` to
    ``(1 - x) pop(dx)``; ``mu_neq`` is None when ``p_neq`` is 0.
    """
    x, w = pop.points, pop.weights / pop.mass
    eq_w, neq_w = x * w, (1.0 - x) * w
    p_neq = float(neq_w.sum())
    mu_eq = EmpiricalMeasure(x, eq_w / eq_w.sum())
    mu_neq = EmpiricalMeasure(x, neq_w / p_neq) if p_neq > 0 else None
    return mu_eq, mu_neq, p_neq


class PopulationSource(object):
    """
    Tilted phi-laws of a star measure, split into the zero part and the
    nonzero part that is actually sampled.
    """

    def __init__(self, pop):
        self.k = pop.k
        x, w = pop.points, pop.weights / pop.mass
        y = pop.phi_points()
        eq_w, neq_w = x * w, (1.0 - x) * w
        self.p_neq = float(neq_w.sum())
        live = y > 0

        self.eq_zero = float(eq_w[~live].sum() / eq_w.sum())
        self._eq = EmpiricalMeasure(y[live], eq_w[live]) \
            if self.eq_zero < 1.0 else None
        if self.p_neq > 0:
            self.neq_zero = float(neq_w[~live].sum() / self.p_neq)
            self._neq = EmpiricalMeasure(y[live], neq_w[live]) \
                if self.neq_zero < 1.0 else None
        else:
            self.neq_zero = 1.0
            self._neq = None

    def sample_eq(self, size, rng):
        """phi-values of nonzero equal-colour arrivals"""
        return self._eq.sample(size, rng) if size else np.empty(0)

    def sample_neq(self, size, rng):
        """phi-values of nonzero other-colour arrivals"""
        return self._neq.sample(size, rng) if size else np.empty(0)


def arrival_probabilities(k, p_neq):
    """
    Cell probabilities of one child: ``k`` equal-colour cells followed by
    ``k`` other-colour cells, cell 0 of the first block being empty.
    """
    eq = np.full(k, (1.0 - p_neq) / (k - 1))
    eq[0] = 0.0
    neq = np.full(k, (k - 2.0) * p_neq / (k - 1.0) ** 2)
    neq[0] = p_neq / (k - 1.0)
    return np.concatenate((eq, neq))


def sample_arrivals(law, k, p_neq, rng, size=None):
    """
    Arrival counts per colour.

    Poisson trees give independent Poisson counts; other laws draw the
    degree and split it multinomially.
    """
    if k < 3:
        raise PreconditionError('Arrivals need k >= 3')
    shape = (k,) if size is None else (size, k)
    if isinstance(law, Poisson):
        rates = law.d * arrival_probabilities(k, p_neq)
        eq = rng.poisson(rates[:k], size=shape)
        neq = rng.poisson(rates[k:], size=shape)
        return ArrivalCounts(eq, neq)

    totals = law.sample(rng, 1 if size is None else size)
    cells = rng.multinomial(totals, arrival_probabilities(k, p_neq))
    if size is None:
        cells = cells[0]
    return ArrivalCounts(cells[..., :k], cells[..., k:])


def arrival_cells(law, k, source, size, rng):
    """
    Flat cell indices ``sample * k + colour`` and the matching phi-values
    of every nonzero arrival in a batch of ``size`` roots.
    """
    keep_eq = 1.0 - source.eq_zero
    keep_neq = 1.0 - source.neq_zero
    rows = np.arange(size)

    if isinstance(law, Poisson):
        rate = law.d / (k - 1.0)
        p = source.p_neq
        n_eq = rng.poisson((k - 1) * (1.0 - p) * rate * keep_eq, size)
        n_first = rng.poisson(p * rate * keep_neq, size)
        n_rest = rng.poisson((k - 2) * p / (k - 1.0) * rate * keep_neq, size)

        eq_cells = np.repeat(rows, n_eq) * k + \
            rng.integers(1, k, size=int(n_eq.sum()))
        first_cells = np.repeat(rows, n_first) * k
        rest_cells = np.repeat(rows, n_rest) * k + \
            rng.integers(1, k, size=int(n_rest.sum()))
        neq_cells = np.concatenate((first_cells, rest_cells))
    else:
        counts = sample_arrivals(law, k, source.p_neq, rng, size)
        eq = rng.binomial(counts.eq, keep_eq)
        neq = rng.binomial(counts.neq, keep_neq)
        cells = np.arange(size * k)
        eq_cells = np.repeat(cells, eq.ravel())
        neq_cells = np.repeat(cells, neq.ravel())

    values = np.concatenate((source.sample_eq(len(eq_cells), rng),
                             source.sample_neq(len(neq_cells), rng)))
    return np.concatenate((eq_cells, neq_cells)), values
