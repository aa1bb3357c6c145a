# -*- encoding: utf-8 -*-
# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
'''
This module is used to test arrivals and the reduced and full steps:
chroma/dynamics/arrivals.py, chroma/dynamics/population.py
'''
#pylint: disable=missing-docstring,invalid-name

import numpy as np
import pytest
from scipy import stats

from chroma.core.errors import PreconditionError
from chroma.core.rng import stream
from chroma.dynamics.arrivals import PopulationSource, \
    arrival_probabilities, sample_arrivals, tilt_split
from chroma.dynamics.population import ReducedSample, bound_violations, \
    gamma_full_step, iterate, reconstruction_gap, reconstruction_scan, \
    reduced_step, reduced_step_sample, summarize_z
from chroma.measures.empirical import EmpiricalMeasure, cdf_gap, \
    ks_distance
from chroma.measures.star import StarMeasure
from chroma.trees.model import Deterministic, Poisson


def mixed(k):
    return StarMeasure.trivial(k).mix(StarMeasure.frozen(k), 0.5)


def test_arrival_probabilities_sum_to_one():
    for k, p in ((3, 0.0), (5, 0.3), (50, 0.9)):
        cells = arrival_probabilities(k, p)
        assert cells[0] == 0.0
        assert cells.sum() == pytest.approx(1.0)
        assert cells[k:].sum() == pytest.approx(p)


def test_tilt_split_mixed():
    k = 4
    mu_eq, mu_neq, p_neq = tilt_split(mixed(k))
    assert p_neq == pytest.approx(0.5 * (1 - 1.0 / k))
    assert mu_neq.points.tolist() == [0.25]
    assert mu_eq.cdf(0.25) == pytest.approx(0.25 / 1.25)


def test_source_of_trivial_has_no_arrivals():
    source = PopulationSource(StarMeasure.trivial(5))
    assert source.eq_zero == 1.0
    assert source.neq_zero == 1.0


def test_summarize_z_edges():
    sample = summarize_z(np.array([[0.0, np.inf, np.inf],
                                   [0.0, 0.0, 0.0]]), 3)
    assert sample.x_new.tolist() == [1.0, 1.0 / 3]
    assert sample.phi_new[0] == np.inf
    assert sample.phi_new[1] == 0.0
    assert sample.w_lower[0] == np.inf
    assert sample.w_lower[1] == 0.0


def test_trivial_fixed_point_is_exact():
    for k in (3, 10, 100):
        sample = reduced_step(StarMeasure.trivial(k), Poisson(8.0), k, 2000,
                              stream(k))
        assert (sample.x_new == 1.0 / k).all()
        assert (sample.w_lower == 0.0).all()


def test_trivial_trajectory_is_constant():
    k = 10
    rows, pop = iterate(StarMeasure.trivial(k), Poisson(12.0), k, 20, 1000,
                        stream(1))
    assert len(rows) == 21
    assert pop.points.tolist() == [1.0 / k]
    for row in rows:
        assert (row.quantiles == 1.0 / k).all()
        assert row.p_frozen == 0.0


def test_iterate_needs_population():
    with pytest.raises(PreconditionError):
        iterate(StarMeasure.trivial(3), Poisson(2.0), 3, 1, 10, stream(0))


def test_frozen_start_poisson():
    # x_new = 1 exactly when both other colours are hit, (1 - e^-3)^2
    k, n = 3, 20000
    sample = reduced_step(StarMeasure.frozen(k), Poisson(6.0), k, n,
                          stream(2))
    expected = (1 - np.exp(-3.0)) ** 2
    observed = np.mean(sample.x_new == 1.0)
    assert abs(observed - expected) < 3 * np.sqrt(expected * (1 - expected) / n)


def test_frozen_start_dary():
    # six children over two colours miss one with probability 2/64
    k, n = 3, 20000
    sample = reduced_step(StarMeasure.frozen(k), Deterministic(6), k, n,
                          stream(3))
    expected = 1 - 2.0 / 64
    observed = np.mean(sample.x_new == 1.0)
    assert abs(observed - expected) < 3 * np.sqrt(expected * (1 - expected) / n)


def test_lower_bound_never_exceeds_phi():
    k = 5
    sample = reduced_step(mixed(k), Poisson(6.0), k, 200000, stream(4))
    assert np.isinf(sample.w_lower).any()
    assert bound_violations(sample) == 0


def test_bound_violations_with_infinite_bounds():
    inf = np.inf
    sample = ReducedSample(x_new=np.ones(4),
                           phi_new=np.array([inf, 1.0, 2.0, 0.5]),
                           w_lower=np.array([inf, inf, 1.0, 0.5 + 1e-12]))
    assert bound_violations(sample) == 1


def test_reduced_step_ignores_workers():
    k = 5
    one = reduced_step(mixed(k), Poisson(6.0), k, 10000, stream(5), workers=1)
    two = reduced_step(mixed(k), Poisson(6.0), k, 10000, stream(5), workers=2)
    assert one.x_new.tobytes() == two.x_new.tobytes()
    assert one.w_lower.tobytes() == two.w_lower.tobytes()


def test_reduced_step_sample_pair():
    x_new, w_lower = reduced_step_sample(mixed(4), Poisson(5.0), 4,
                                         stream(6))
    assert 0.25 <= x_new <= 1.0
    assert w_lower >= 0.0


def test_full_and_reduced_steps_agree():
    k, n = 5, 20000
    pop, law = mixed(k), Poisson(6.0)
    full = gamma_full_step(pop, law, k, n, stream(7), symmetrize=True)
    assert np.allclose(full.sum(axis=1), 1.0)
    reduced = reduced_step(pop, law, k, n, stream(8))
    distance = ks_distance(EmpiricalMeasure.from_samples(full.max(axis=1)),
                           EmpiricalMeasure.from_samples(reduced.x_new))
    assert distance <= 3.0 / np.sqrt(n)


def test_full_step_is_limited():
    with pytest.raises(PreconditionError):
        gamma_full_step(mixed(65), Poisson(2.0), 65, 10, stream(0))


def test_scan_separates_degrees():
    rows = reconstruction_scan(3, Poisson, [0.5, 12.0], 5, 2000, stream(9))
    assert [row.d for row in rows] == [0.5, 12.0]
    assert rows[0].gap < rows[1].gap
    assert rows[1].p_frozen > 0.5


def test_reconstruction_gap():
    assert reconstruction_gap(StarMeasure.trivial(5)) == 0.0
    assert reconstruction_gap(StarMeasure.frozen(5)) == pytest.approx(0.8)
    mixed = StarMeasure([0.25, 0.75], [0.5, 0.5], k=4)
    assert reconstruction_gap(mixed) == pytest.approx(0.25)


def test_tilt_split_frozen_has_no_other_colour():
    mu_eq, mu_neq, p_neq = tilt_split(StarMeasure.frozen(5))
    assert p_neq == 0.0
    assert mu_neq is None
    assert mu_eq.points.tolist() == [1.0]


def test_tilt_split_trivial():
    k = 6
    mu_eq, mu_neq, p_neq = tilt_split(StarMeasure.trivial(k))
    assert p_neq == pytest.approx(1 - 1.0 / k)
    assert mu_eq.points.tolist() == [1.0 / k]
    assert mu_neq.points.tolist() == [1.0 / k]


def test_sample_arrivals_vanishing_degree():
    counts = sample_arrivals(Poisson(1e-6), 4, 0.5, stream(20), size=100000)
    empty = (counts.eq.sum(axis=1) + counts.neq.sum(axis=1)) == 0
    assert empty.mean() >= 0.999
    assert (counts.eq[:, 0] == 0).all()


def test_sample_arrivals_mean_degree():
    d, n = 3.0, 1000000
    counts = sample_arrivals(Poisson(d), 5, 0.4, stream(21), size=n)
    totals = counts.eq.sum(axis=1) + counts.neq.sum(axis=1)
    assert abs(totals.mean() - d) <= 3 * np.sqrt(d / n)
    assert (counts.eq[:, 0] == 0).all()


def test_sample_arrivals_dary_conserves_degree():
    counts = sample_arrivals(Deterministic(7), 4, 0.3, stream(22), size=5000)
    totals = counts.eq.sum(axis=1) + counts.neq.sum(axis=1)
    assert (totals == 7).all()
    assert (counts.eq[:, 0] == 0).all()
    single = sample_arrivals(Deterministic(7), 4, 0.3, stream(23))
    assert single.eq.shape == (4,)
    assert single.eq.sum() + single.neq.sum() == 7


def test_sample_arrivals_needs_three_colours():
    with pytest.raises(PreconditionError):
        sample_arrivals(Poisson(2.0), 2, 0.5, stream(0))


def test_trivial_source_with_many_children():
    sample = reduced_step(StarMeasure.trivial(3), Poisson(20.0), 3, 100,
                          stream(0))
    assert sample.x_new.dtype == np.float64
    assert (sample.x_new == 1.0 / 3).all()
    assert (sample.w_lower == 0.0).all()


def test_vanishing_degree_keeps_trivial_norm():
    sample = reduced_step(StarMeasure.frozen(3), Poisson(1e-6), 3, 100,
                          stream(0))
    assert sample.x_new.dtype == np.float64
    assert np.mean(sample.x_new == 1.0 / 3) >= 0.99
    x_new, w_lower = reduced_step_sample(StarMeasure.trivial(4), Poisson(5.0),
                                         4, stream(1))
    assert (x_new, w_lower) == (0.25, 0.0)


def test_step_preserves_order_on_coupled_seeds():
    k, n = 4, 20000
    trivial, frozen = StarMeasure.trivial(k), StarMeasure.frozen(k)
    lower = reduced_step(trivial.mix(frozen, 0.3), Poisson(6.0), k, n,
                         stream(24))
    upper = reduced_step(trivial.mix(frozen, 0.7), Poisson(6.0), k, n,
                         stream(24))
    _, gap = cdf_gap(EmpiricalMeasure.from_samples(lower.x_new),
                     EmpiricalMeasure.from_samples(upper.x_new))
    assert gap.min() >= -3.0 / np.sqrt(n)


def test_full_step_argmax_is_uniform():
    k, n = 5, 20000
    full = gamma_full_step(mixed(k), Poisson(6.0), k, n, stream(25),
                           symmetrize=True)
    counts = np.bincount(full.argmax(axis=1), minlength=k)
    assert stats.chisquare(counts).pvalue > 1e-3


def test_far_above_freezing_stays_frozen():
    rows, _ = iterate(StarMeasure.frozen(3), Poisson(20.0), 3, 20, 10000,
                      stream(26))
    assert min(row.p_frozen for row in rows) >= 0.5


def test_below_reconstruction_goes_trivial():
    rows, _ = iterate(StarMeasure.frozen(3), Poisson(1.0), 3, 20, 10000,
                      stream(27))
    assert rows[-1].mean - 1.0 / 3 <= 1e-2
