# -*- encoding: utf-8 -*-
# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
'''
This module is used to test the compound Poisson samplers:
chroma/candidate/samplers.py
'''
#pylint: disable=missing-docstring,invalid-name

import unittest

import numpy as np
import pytest

from chroma.candidate.family import build_candidate
from chroma.candidate.params import CandidateParams
from chroma.candidate.samplers import BoundGap, s0_bound_gap, s0_cut, \
    sample_S0, sample_S1, sample_V_tilde, sample_W0_tilde, sample_Z1_tilde, \
    v_tilde_masses, z1_zero_probability
from chroma.core.rng import stream

N = 40000


def within(observed, expected, n=N, sigmas=4):
    return abs(observed - expected) < \
        sigmas * np.sqrt(expected * (1 - expected) / n)


class SamplersTest(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.family = build_candidate(CandidateParams(), 100)

    def test_s1_lattice(self):
        draws = sample_S1(self.family, N, stream(0))
        counts = draws / self.family.alpha
        assert np.allclose(counts, np.round(counts))
        assert within(np.mean(draws == 0), np.exp(-0.5))

    def test_s0_zero_mass(self):
        rate, tail = s0_cut(self.family)
        assert rate > 0
        assert tail.lo == self.family.params.bigm
        draws = sample_S0(self.family, N, stream(1))
        assert within(np.mean(draws == 0), np.exp(-rate))
        assert (draws[draws > 0] > self.family.params.bigm).all()

    def test_z1_zero_probability(self):
        draws = sample_Z1_tilde(self.family, N, stream(2))
        assert within(np.mean(draws == 0),
                      z1_zero_probability(self.family))

    def test_v_tilde_parts(self):
        s1_mass, tail_mass, inf_mass = v_tilde_masses(self.family)
        assert s1_mass + tail_mass + inf_mass == pytest.approx(1.0)
        draws = sample_V_tilde(self.family, N, stream(3))
        assert within(np.mean(np.isneginf(draws)), inf_mass)
        finite = draws[np.isfinite(draws)]
        # the S1 part sits below -log sigma, the cut tail above M
        sigma = self.family.params.sigma
        low = finite[finite < self.family.params.bigm]
        assert (low <= -np.log(sigma)).all()
        assert within(np.mean(draws > self.family.params.bigm), tail_mass)

    def test_w0_tilde_minus_infinity(self):
        draws = sample_W0_tilde(self.family, N, stream(4))
        _, _, inf_mass = v_tilde_masses(self.family)
        assert within(np.mean(np.isneginf(draws)), inf_mass)
        assert not np.isnan(draws).any()

    def test_s0_bound_gap_report(self):
        gap = s0_bound_gap(self.family, 20000, stream(5))
        assert isinstance(gap, BoundGap)
        assert gap.n_nonzero > 0
        assert gap.tolerance == pytest.approx(3.0 / np.sqrt(gap.n_nonzero))
        assert -1.0 <= gap.statistic <= 1.0
