# -*- encoding: utf-8 -*-
# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
'''
This module is used to test the relabelling permutations:
chroma/reconstruction/permutations.py
'''
#pylint: disable=missing-docstring,invalid-name

import numpy as np
import pytest

from chroma.core.errors import PreconditionError
from chroma.core.rng import stream
from chroma.reconstruction.permutations import compose, invert, \
    is_permutation, nu1_mix, nu1_permutations, nu2_mix, nu2_permutations, \
    sample_nu1, sample_nu2


def test_compose_and_invert():
    perm = np.array([2, 0, 3, 1])
    assert compose(perm, invert(perm)).tolist() == [0, 1, 2, 3]
    assert compose(invert(perm), perm).tolist() == [0, 1, 2, 3]
    assert compose(perm, perm).tolist() == [3, 2, 1, 0]


def test_nu1_fixes_colour():
    rng = stream(0)
    fixed = rng.integers(5, size=1000)
    perms = nu1_permutations(fixed, rng.random((1000, 5)))
    assert is_permutation(perms)
    assert (perms[np.arange(1000), fixed] == fixed).all()


def test_nu1_uniform_on_the_rest():
    rng = stream(1)
    n = 30000
    perms = nu1_permutations(np.zeros(n, dtype=int), rng.random((n, 3)))
    swapped = np.mean(perms[:, 1] == 2)
    assert abs(swapped - 0.5) < 4 * np.sqrt(0.25 / n)


def test_nu2_identity_or_uniform():
    rng = stream(2)
    keys = rng.random((4, 6))
    perms = nu2_permutations([0.0, 1.0, 0.5, 0.5], [0.3, 0.3, 0.4, 0.6],
                             keys)
    assert perms[0].tolist() == list(range(6))
    assert perms[1].tolist() == np.argsort(keys[1]).tolist()
    assert perms[2].tolist() == np.argsort(keys[2]).tolist()
    assert perms[3].tolist() == list(range(6))


def test_single_samplers():
    rng = stream(3)
    perm = sample_nu1(2, 4, rng)
    assert perm[2] == 2 and is_permutation(perm)
    assert sample_nu2(0.0, 4, rng).tolist() == [0, 1, 2, 3]
    with pytest.raises(PreconditionError):
        sample_nu1(4, 4, rng)
    with pytest.raises(PreconditionError):
        sample_nu2(1.5, 4, rng)


def test_mixes_match_averages():
    rng = stream(4)
    vector = np.array([0.5, 0.3, 0.15, 0.05])
    n = 40000
    perms = nu1_permutations(np.zeros(n, dtype=int), rng.random((n, 4)))
    # (pi o v)(i) = v(pi^-1(i)) averaged over pi
    moved = vector[invert(perms)].mean(axis=0)
    assert np.allclose(moved, nu1_mix(vector, 0), atol=0.01)
    assert np.allclose(nu2_mix(vector, 1.0), 0.25)
    assert np.allclose(nu2_mix(vector, 0.0), vector)
