# -*- encoding: utf-8 -*-
# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
'''
This module is used to test weighted-atom measures and dominance:
chroma/measures/empirical.py
'''
#pylint: disable=missing-docstring,invalid-name

import unittest

import numpy as np
import pytest

from chroma.core.errors import PreconditionError
from chroma.core.rng import stream
from chroma.measures.empirical import EmpiricalMeasure, compound_sums, \
    cut_above, cut_below, dominates, dominates_by_eps, ks_distance, oplus, \
    otimes
from chroma.trees.model import Poisson


def bernoulli(p, low=0.0, high=1.0):
    return EmpiricalMeasure([low, high], [1.0 - p, p])


class MeasureTest(unittest.TestCase):

    @staticmethod
    def test_duplicates_merge():
        mu = EmpiricalMeasure([2.0, 1.0, 2.0, 3.0], [0.25, 0.25, 0.25, 0.0])
        assert mu.points.tolist() == [1.0, 2.0]
        assert mu.weights.tolist() == [0.25, 0.5]
        assert mu.mass == 0.75

    @staticmethod
    def test_cdf_sides():
        mu = EmpiricalMeasure([0.0, 1.0], [0.5, 0.5])
        assert mu.cdf(0.0) == 0.5
        assert mu.cdf_left(0.0) == 0.0
        assert mu.cdf(-1.0) == 0.0
        assert mu.cdf(5.0) == 1.0

    @staticmethod
    def test_quantile():
        mu = EmpiricalMeasure([1.0, 2.0, 3.0], [0.2, 0.3, 0.5])
        assert mu.quantile(0.2) == 1.0
        assert mu.quantile(0.21) == 2.0
        assert mu.quantile(1.0) == 3.0

    @staticmethod
    def test_infinite_atoms():
        mu = EmpiricalMeasure([-np.inf, 0.0, np.inf], [0.1, 0.8, 0.1])
        assert mu.cdf(-np.inf) == pytest.approx(0.1)
        assert mu.cdf(1e300) == pytest.approx(0.9)

    def test_rejects_bad_weights(self):
        with self.assertRaises(PreconditionError):
            EmpiricalMeasure([0.0, 1.0], [0.5, -0.5])
        with self.assertRaises(PreconditionError):
            EmpiricalMeasure([np.nan], [1.0])
        with self.assertRaises(PreconditionError):
            EmpiricalMeasure([0.0, 1.0], [1.0])

    @staticmethod
    def test_mix_and_mean():
        mu = bernoulli(0.5).mix(EmpiricalMeasure.point_mass(4.0), 0.5)
        assert mu.mass == pytest.approx(1.0)
        assert mu.mean() == pytest.approx(2.25)


def test_oplus_exact():
    total = oplus(bernoulli(0.5), bernoulli(0.5))
    assert total.points.tolist() == [0.0, 1.0, 2.0]
    assert np.allclose(total.weights, [0.25, 0.5, 0.25])


def test_oplus_opposite_infinities():
    with pytest.raises(PreconditionError):
        oplus(EmpiricalMeasure.point_mass(np.inf),
              EmpiricalMeasure.point_mass(-np.inf))


def test_oplus_monte_carlo_needs_rng():
    big = EmpiricalMeasure.from_samples(np.arange(2000.0))
    with pytest.raises(PreconditionError):
        oplus(big, big)
    total = oplus(big, big, n_samples=20000, rng=stream(0))
    assert total.mean() == pytest.approx(1999.0, rel=0.02)


def test_compound_sums():
    sums = compound_sums([0, 2, 3], EmpiricalMeasure.point_mass(1.5),
                         stream(0))
    assert sums.tolist() == [0.0, 3.0, 4.5]


def test_otimes_poisson_mean():
    law = otimes(Poisson(3.0), bernoulli(0.5), stream(1), n_samples=40000)
    # compound Poisson with mean 1.5 and variance 1.5
    assert abs(law.mean() - 1.5) < 3 * np.sqrt(1.5 / 40000)
    assert otimes(0, bernoulli(0.5), stream(1)).points.tolist() == [0.0]


def test_cut_above_splits_atom():
    mu = EmpiricalMeasure([1.0, 2.0, 3.0], [0.5, 0.75, 0.25])
    cut, threshold = cut_above(mu)
    assert threshold == 2.0
    assert cut.points.tolist() == [1.0, 2.0]
    assert np.allclose(cut.weights, [0.5, 0.5])


def test_cut_below_mirror():
    mu = EmpiricalMeasure([1.0, 2.0, 3.0], [0.5, 0.75, 0.25])
    cut, threshold = cut_below(mu)
    assert threshold == 2.0
    assert cut.points.tolist() == [2.0, 3.0]
    assert np.allclose(cut.weights, [0.75, 0.25])


def test_cut_unit_mass_is_identity():
    mu = bernoulli(0.3)
    cut, threshold = cut_above(mu)
    assert cut is mu
    assert threshold == np.inf
    assert cut_below(mu)[1] == -np.inf


def test_cut_needs_mass_one():
    with pytest.raises(PreconditionError):
        cut_above(EmpiricalMeasure([0.0], [0.5]))


def test_dominance_partial_order():
    low, mid, high = bernoulli(0.2), bernoulli(0.5), bernoulli(0.8)
    for mu in (low, mid, high):
        assert dominates(mu, mu)
    assert dominates(low, mid) and dominates(mid, high)
    assert dominates(low, high)
    assert not dominates(high, low)
    # incomparable pair
    spread = EmpiricalMeasure([0.0, 2.0], [0.5, 0.5])
    assert not dominates(EmpiricalMeasure.point_mass(1.0), spread)
    assert not dominates(spread, EmpiricalMeasure.point_mass(1.0))


def test_dominance_slack():
    assert not dominates(bernoulli(0.51), bernoulli(0.5))
    assert dominates(bernoulli(0.51), bernoulli(0.5), slack=0.02)


def test_dominates_by_eps_bernoulli_pair():
    # the CDF gap on the shared support is 0.3 at 0
    low, high = bernoulli(0.2), bernoulli(0.5)
    assert dominates_by_eps(low, high, 0.3)
    assert not dominates_by_eps(low, high, 0.31)
    # escape clauses: F_mu = 1 past the top atom, F_nu = 0 below its support
    shifted = bernoulli(0.5, low=1.0, high=2.0)
    assert dominates_by_eps(bernoulli(0.5), shifted, 0.5)


def test_ks_distance():
    assert ks_distance(bernoulli(0.2), bernoulli(0.5)) == pytest.approx(0.3)
    assert ks_distance(bernoulli(0.2), bernoulli(0.2)) == 0.0
