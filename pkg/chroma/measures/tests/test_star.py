# -*- encoding: utf-8 -*-
# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
'''
This module is used to test star measures, phi and quantile reductions:
chroma/measures/star.py, chroma/measures/io.py
'''
#pylint: disable=missing-docstring,invalid-name

import io

import numpy as np
import pytest

from chroma.core.errors import PreconditionError
from chroma.core.rng import stream
from chroma.measures.empirical import EmpiricalMeasure, dominates, \
    ks_distance
from chroma.measures.io import dumps_measure, read_measure, write_measure
from chroma.measures.star import StarMeasure, phi, phi_inv, \
    phi_inv_complement, quantile_reduce, tq


def test_phi_fixed_points():
    for k in (3, 10, 1000):
        assert phi(1.0 / k, k) == 0.0
        assert phi_inv(0.0, k) == 1.0 / k
    assert phi(1.0, 5) == np.inf
    assert phi_inv(np.inf, 5) == 1.0


def test_phi_inverse_pair():
    x = np.linspace(0.2, 0.999, 50)
    assert np.allclose(phi_inv(phi(x, 5), 5), x, rtol=1e-12)
    y = np.array([-0.2, 0.5, 3.0])
    assert np.allclose(phi(phi_inv(y, 5), 5), y, rtol=1e-9)


def test_phi_increasing():
    x = np.linspace(0.0, 0.99, 100)
    assert (np.diff(phi(x, 4)) > 0).all()


def test_phi_inv_complement_without_cancellation():
    y = 40.0
    assert phi_inv_complement(y, 10) > 0.0
    assert phi_inv_complement(y, 10) == pytest.approx(np.exp(-y), rel=1e-6)


def test_phi_domain():
    with pytest.raises(PreconditionError):
        phi(1.5, 3)
    with pytest.raises(PreconditionError):
        phi_inv(-1.0, 3)


def test_star_measure_snaps_to_floor():
    mu = StarMeasure([1.0 / 3 + 1e-13, 1.0], [0.5, 0.5], k=3)
    assert mu.points[0] == 1.0 / 3
    assert mu.gap() == pytest.approx(0.5 * (1.0 - 1.0 / 3))


def test_star_measure_rejects_bad_support():
    with pytest.raises(PreconditionError):
        StarMeasure([0.1], [1.0], k=3)
    with pytest.raises(PreconditionError):
        StarMeasure([0.5], [0.5], k=3)


def test_trivial_and_frozen():
    assert StarMeasure.trivial(7).points.tolist() == [1.0 / 7]
    assert StarMeasure.frozen(7).points.tolist() == [1.0]
    assert (StarMeasure.trivial(7).phi_points() == 0.0).all()


def test_quantile_reduce_push_forward():
    k = 5
    rng = stream(3)
    mu1 = StarMeasure.from_samples(0.2 + 0.8 * rng.random(20000) ** 0.5, k=k)
    mu2 = StarMeasure.from_samples(0.2 + 0.8 * rng.random(20000) ** 2, k=k)
    slack = 3.0 / np.sqrt(20000)
    assert dominates(mu2, mu1, slack=slack)
    reduce_ = quantile_reduce(mu1, mu2, k, slack=slack)
    y = mu1.sample(20000, rng)
    q = reduce_(y, rng.random(20000))
    assert (q <= y).all()
    pushed = EmpiricalMeasure.from_samples(q)
    assert ks_distance(pushed, mu2) <= 3.0 / np.sqrt(20000)


def test_quantile_reduce_atoms_use_uniforms():
    k = 3
    frozen = StarMeasure.frozen(k)
    target = StarMeasure([1.0 / 3, 1.0], [0.5, 0.5], k=k)
    reduce_ = quantile_reduce(frozen, target, k)
    assert reduce_(1.0, 0.25) == 1.0 / 3
    assert reduce_(1.0, 0.75) == 1.0


def test_quantile_reduce_needs_dominance():
    with pytest.raises(PreconditionError):
        quantile_reduce(StarMeasure.trivial(3), StarMeasure.frozen(3), 3)


def test_tq_mixes_back_to_q():
    k = 4
    target = StarMeasure([0.25, 0.6], [0.5, 0.5], k=k)
    reduce_ = quantile_reduce(StarMeasure.frozen(k), target, k)
    y = np.array([1.0, 1.0])
    u = np.array([0.9, 0.1])
    weight = tq(reduce_, y, u, k)
    q = reduce_(y, u)
    assert np.allclose((1 - weight) * y + weight / k, q)
    assert tq(reduce_, 0.25, 0.5, k) == 0.0


def test_tq_domain():
    reduce_ = quantile_reduce(StarMeasure.frozen(3), StarMeasure.frozen(3))
    with pytest.raises(PreconditionError):
        tq(reduce_, 0.1, 0.5, 3)


def test_measure_csv():
    mu = StarMeasure([0.25, 0.5, 1.0], [0.25, 0.25, 0.5], k=4)
    text = dumps_measure(mu)
    lines = text.splitlines()
    assert lines[0] == '# mass=1.0 k=4'
    assert lines[1] == 'point,weight'
    back = read_measure(io.StringIO(text))
    assert isinstance(back, StarMeasure)
    assert back.k == 4
    assert back.points.tolist() == mu.points.tolist()


def test_plain_measure_csv():
    out = io.StringIO()
    write_measure(out, EmpiricalMeasure([0.0, np.inf], [0.5, 0.5]))
    back = read_measure(io.StringIO(out.getvalue()))
    assert not isinstance(back, StarMeasure)
    assert back.points[-1] == np.inf


def test_measure_csv_needs_header():
    with pytest.raises(ValueError):
        read_measure(io.StringIO('point,weight\n0.5,1.0\n'))
